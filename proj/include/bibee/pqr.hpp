// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_PQR_HPP
#define BIBEE_PQR_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bibee/core.hpp"

namespace bibee
{

// Reads ATOM/HETATM records. Both column-aligned and free-form whitespace
// layouts are accepted: the last five numeric fields of a record are taken as
// x y z charge radius, so chain and residue fields may be present or absent.
// Radii are kept on the distribution but never used for surface construction.
ChargeDistribution read_pqr(std::istream &in, std::string label = {});
ChargeDistribution load_pqr(const std::filesystem::path &path);

// Writes one ATOM record per charge with round-trip precision.
void write_pqr(std::ostream &out, const ChargeDistribution &dist);

}  // namespace bibee

#endif  // BIBEE_PQR_HPP
