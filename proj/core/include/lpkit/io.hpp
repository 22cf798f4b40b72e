#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/corpus.hpp"
#include "lpkit/cube_geometry.hpp"
#include "lpkit/grid.hpp"

namespace lpkit {

inline constexpr int io_schema_version = 1;

enum class GridFileFormat { json, binary };

/// {schema_version, kind, dim, points_per_axis, period, is_real, values: [[re, im], ...]}.
std::string grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(std::string_view text);

/// Binary layout, little endian: "LPGF", u32 schema_version, u32 dim, u64 points_per_axis,
/// f64 period, u8 is_real, then (re, im) f64 pairs in row-major order.
std::string grid_function_to_binary(const GridFunction& f);
GridFunction grid_function_from_binary(std::string_view bytes);

void write_grid_function(const std::filesystem::path& path, const GridFunction& f, GridFileFormat format);
/// Reads either format, recognised by the leading bytes. Throws FormatError on malformed input.
GridFunction read_grid_function(const std::filesystem::path& path);

std::string corpus_manifest_json(const TestCorpus& corpus);
std::string whitney_json(const WhitneyDecomposition& decomp, const std::vector<ClauseResult>& clauses);
std::string cz_json(const CZDecomposition& decomp);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lpkit
