#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpkit/grid.hpp"

namespace lpkit {

enum class CorpusFamily { band_limited, gaussian_bump, indicator_sum, smooth_compact };

std::string_view to_string(CorpusFamily family);
CorpusFamily parse_corpus_family(std::string_view name);

/// Analytic description of one corpus entry, independent of the grid it is sampled on.
struct CorpusGenerator {
    struct Mode {
        std::array<std::int64_t, 2> k{};  // integer wave vector
        double amplitude = 0.0;
        double phase = 0.0;
    };
    struct Blob {
        Point center{};
        double width = 0.0;  // sigma for gaussians, radius for compact bumps, half-side for boxes
        double amplitude = 0.0;
    };

    CorpusFamily family = CorpusFamily::band_limited;
    std::vector<Mode> modes;
    std::vector<Blob> blobs;

    /// Samples on the grid with the mean subtracted afterwards.
    GridFunction sample(const GridSpec& spec) const;
};

struct CorpusEntry {
    std::string label;
    CorpusGenerator generator;
    GridFunction function;
};

class TestCorpus {
public:
    TestCorpus(std::uint64_t seed, CorpusFamily family, GridSpec spec, std::vector<CorpusEntry> entries);

    std::uint64_t seed() const noexcept { return seed_; }
    CorpusFamily family() const noexcept { return family_; }
    const GridSpec& spec() const noexcept { return spec_; }
    const std::vector<CorpusEntry>& entries() const& noexcept { return entries_; }
    std::vector<CorpusEntry> entries() && { return std::move(entries_); }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Same generators sampled on another grid (used for refinement studies).
    TestCorpus resampled(const GridSpec& spec) const;

private:
    std::uint64_t seed_;
    CorpusFamily family_;
    GridSpec spec_;
    std::vector<CorpusEntry> entries_;
};

TestCorpus make_corpus(std::uint64_t seed, CorpusFamily family, std::size_t count, const GridSpec& spec);

}  // namespace lpkit
