#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>
#include "sigens/mps.hpp"

// Checkpoint formats for MatrixProductState.
//
// Binary layout (all integers and floats little-endian):
//   char[8]   magic "SIGMPS\0\1"
//   u32       format version (1)
//   u32       L
//   u32       d
//   u32       canonical form (0 none, 1 left, 2 right, 3 mixed)
//   i32       center
//   u64[L+1]  bond dimensions m_0 ... m_L
//   per site, per sigma: block m_{l-1} x m_l in row-major order,
//   each entry as f64 real part followed by f64 imaginary part.
//
// JSON mirrors the same content:
//   {"format": "sigens-mps", "version": 1, "length": L, "local_dim": d,
//    "canonical": "left", "center": c, "bond_dims": [...],
//    "sites": [{"blocks": [{"rows": r, "cols": c, "data": [re, im, ...]}]}]}
namespace sigens {

void write_mps_binary(std::ostream& out, const MatrixProductState& psi);
MatrixProductState read_mps_binary(std::istream& in);

void save_mps_binary(const std::string& path, const MatrixProductState& psi);
MatrixProductState load_mps_binary(const std::string& path);

nlohmann::json mps_to_json(const MatrixProductState& psi);
MatrixProductState mps_from_json(const nlohmann::json& j);

std::string to_string(CanonicalForm form);
CanonicalForm canonical_form_from_string(const std::string& s);

} // namespace sigens
