#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wilson/lattice.hpp"
#include "wilson/unitary_tuple.hpp"

namespace wilson {

/// Tolerance on ||U^*U - 1|| (entrywise max) applied when reading links or
/// tuple matrices from disk.
inline constexpr double kLoadUnitarityTol = 1e-8;

// WGF1 gauge configurations and WUT1 unitary tuples. Layout is documented in
// docs/file-formats.md.
void write_wgf1(std::ostream& out, const GaugeField& f, const std::string& comment = "");
GaugeField read_wgf1(std::istream& in);
void save_gauge_field(const std::filesystem::path& path, const GaugeField& f, const std::string& comment = "");
GaugeField load_gauge_field(const std::filesystem::path& path);

void write_wut1(std::ostream& out, const UnitaryTuple& t, const std::string& comment = "");
UnitaryTuple read_wut1(std::istream& in);
void save_unitary_tuple(const std::filesystem::path& path, const UnitaryTuple& t, const std::string& comment = "");
UnitaryTuple load_unitary_tuple(const std::filesystem::path& path);

} // namespace wilson
