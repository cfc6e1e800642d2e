// units.hpp: conversion between spectroscopic input units and atomic units
//
// Everything inside the library works in atomic units with hbar = 1, so an
// energy and an angular frequency are the same number (hartree).

#pragma once

#include <string_view>

namespace polariton::units {

enum class Unit { inverse_cm, debye, internal };

// CODATA 2018: one hartree expressed in cm^-1.
inline constexpr double hartree_in_inverse_cm = 219474.6313632;
inline constexpr double inverse_cm = 1.0 / hartree_in_inverse_cm;
// 1 D = 1e-21 / c  C m, divided by e * a0.
inline constexpr double debye = 1e-21 / 299792458.0 / (1.602176634e-19 * 5.29177210903e-11);
// Atomic unit of time in seconds.
inline constexpr double au_time_seconds = 2.4188843265857e-17;

Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit u);

// Converts between two units of the same dimension. "internal" takes the
// dimension of the other argument (energy for cm^-1, dipole for debye).
double convert(double value, Unit from, Unit to);
double convert(double value, std::string_view from, std::string_view to);

}  // namespace polariton::units
