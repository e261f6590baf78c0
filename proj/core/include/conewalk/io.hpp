#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "conewalk/cone.hpp"
#include "conewalk/decomp.hpp"
#include "conewalk/geodesic.hpp"
#include "conewalk/report.hpp"

namespace conewalk {

/// CSV: header `tau,value`, one row per node, full double precision.
void write_csv(std::ostream& out, const Path1D& path);
/// CSV: header `tau,x0,x1`.
void write_csv(std::ostream& out, const Path2D& path);
void write_csv(std::ostream& out, const ConePath& path);
/// CSV: header `tau,phi` over the forward node values.
void write_csv(std::ostream& out, const Diffeo& phi);

Path1D read_path_1d(std::istream& in);
Path2D read_path_2d(std::istream& in);
ConePath read_cone_path(std::istream& in);

/// FNV-1a over the canonical key=value rendering of a flat config; embedded
/// in every output artifact so files are traceable to the run that made them.
std::uint64_t config_hash(const std::string& canonical);

std::string report_to_json(const McReport& report, std::uint64_t cfg_hash);
std::string geodesic_to_json(const GeodesicResult& result, std::uint64_t cfg_hash);

}  // namespace conewalk
