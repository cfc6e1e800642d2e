#include "polariton/units.hpp"

#include "polariton/errors.hpp"

#include <string>

namespace polariton::units {

Unit parse_unit(std::string_view name) {
    if (name == "cm-1" || name == "cm^-1" || name == "1/cm" || name == "wavenumber") {
        return Unit::inverse_cm;
    }
    if (name == "D" || name == "debye" || name == "Debye") {
        return Unit::debye;
    }
    if (name == "internal" || name == "au" || name == "a.u.") {
        return Unit::internal;
    }
    throw UnknownUnit("unknown unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::inverse_cm: return "cm-1";
        case Unit::debye: return "debye";
        case Unit::internal: return "internal";
    }
    return "internal";
}

namespace {

double scale(Unit u) {
    switch (u) {
        case Unit::inverse_cm: return inverse_cm;
        case Unit::debye: return debye;
        case Unit::internal: return 1.0;
    }
    return 1.0;
}

}  // namespace

double convert(double value, Unit from, Unit to) {
    if (from == to) {
        return value;
    }
    if (from != Unit::internal && to != Unit::internal) {
        throw DimensionMismatch("cannot convert " + std::string(unit_name(from)) + " to " +
                                std::string(unit_name(to)));
    }
    return value * scale(from) / scale(to);
}

double convert(double value, std::string_view from, std::string_view to) {
    return convert(value, parse_unit(from), parse_unit(to));
}

}  // namespace polariton::units
