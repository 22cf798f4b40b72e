#include "lpkit/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "lpkit/error.hpp"

namespace lpkit {
namespace {

// Uniform double in [lo, hi) from the raw engine bits, so corpora do not depend
// on the standard library's distribution implementation.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}
    double operator()(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

private:
    std::mt19937_64 engine_;
};

constexpr double kPi = std::numbers::pi;

double periodic_delta(double x, double c, double period) {
    double d = std::fmod(x - c, period);
    if (d < -period / 2) d += period;
    if (d >= period / 2) d -= period;
    return d;
}

CorpusGenerator band_limited(Uniform& rng, const GridSpec& spec) {
    CorpusGenerator g;
    g.family = CorpusFamily::band_limited;
    const auto band = static_cast<std::int64_t>(spec.points_per_axis() / 8);
    const std::int64_t lo1 = spec.dim() == 1 ? 0 : -band;
    const std::int64_t hi1 = spec.dim() == 1 ? 0 : band;
    for (std::int64_t k0 = 0; k0 <= band; ++k0) {
        for (std::int64_t k1 = lo1; k1 <= hi1; ++k1) {
            // One representative of each +-k pair; the cosine supplies the conjugate.
            if (k0 == 0 && k1 <= 0) continue;
            const double r = std::hypot(static_cast<double>(k0), static_cast<double>(k1));
            if (r > static_cast<double>(band)) continue;
            CorpusGenerator::Mode m;
            m.k = {k0, k1};
            m.amplitude = rng(0.5, 1.0) / (1.0 + r);
            m.phase = rng(0.0, 2.0 * kPi);
            g.modes.push_back(m);
        }
    }
    return g;
}

CorpusGenerator blobs(Uniform& rng, const GridSpec& spec, CorpusFamily family) {
    CorpusGenerator g;
    g.family = family;
    const double L = spec.period();
    const int count = family == CorpusFamily::indicator_sum ? 3 : 2;
    for (int b = 0; b < count; ++b) {
        CorpusGenerator::Blob blob;
        blob.center = {rng(0.375 * L, 0.625 * L), spec.dim() == 2 ? rng(0.375 * L, 0.625 * L) : 0.0};
        switch (family) {
            case CorpusFamily::gaussian_bump: blob.width = rng(L / 24, L / 12); break;
            case CorpusFamily::smooth_compact: blob.width = rng(L / 10, L / 6); break;
            default: blob.width = rng(L / 32, L / 12); break;
        }
        blob.amplitude = rng(0.5, 1.5) * (rng(0.0, 1.0) < 0.3 ? -1.0 : 1.0);
        g.blobs.push_back(blob);
    }
    return g;
}

}  // namespace

std::string_view to_string(CorpusFamily family) {
    switch (family) {
        case CorpusFamily::band_limited: return "band_limited";
        case CorpusFamily::gaussian_bump: return "gaussian_bump";
        case CorpusFamily::indicator_sum: return "indicator_sum";
        case CorpusFamily::smooth_compact: return "smooth_compact";
    }
    return "unknown";
}

CorpusFamily parse_corpus_family(std::string_view name) {
    for (auto f : {CorpusFamily::band_limited, CorpusFamily::gaussian_bump, CorpusFamily::indicator_sum,
                   CorpusFamily::smooth_compact})
        if (to_string(f) == name) return f;
    throw ParameterError("unknown corpus family '" + std::string(name) + "'");
}

GridFunction CorpusGenerator::sample(const GridSpec& spec) const {
    const double L = spec.period();
    const int dim = spec.dim();
    auto value = [&](const Point& x) {
        double v = 0.0;
        for (const auto& m : modes) {
            const double arg = 2.0 * kPi * (static_cast<double>(m.k[0]) * x[0] + static_cast<double>(m.k[1]) * x[1]) / L;
            v += m.amplitude * std::cos(arg + m.phase);
        }
        for (const auto& b : blobs) {
            const double d0 = periodic_delta(x[0], b.center[0], L);
            const double d1 = dim == 2 ? periodic_delta(x[1], b.center[1], L) : 0.0;
            switch (family) {
                case CorpusFamily::gaussian_bump:
                    v += b.amplitude * std::exp(-(d0 * d0 + d1 * d1) / (2.0 * b.width * b.width));
                    break;
                case CorpusFamily::smooth_compact: {
                    const double r2 = (d0 * d0 + d1 * d1) / (b.width * b.width);
                    if (r2 < 1.0) v += b.amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
                    break;
                }
                case CorpusFamily::indicator_sum:
                    if (std::abs(d0) < b.width && std::abs(d1) < b.width) v += b.amplitude;
                    break;
                case CorpusFamily::band_limited: break;
            }
        }
        return v;
    };
    return GridFunction::sample(spec, value).mean_free();
}

TestCorpus::TestCorpus(std::uint64_t seed, CorpusFamily family, GridSpec spec, std::vector<CorpusEntry> entries)
    : seed_(seed), family_(family), spec_(spec), entries_(std::move(entries)) {}

TestCorpus TestCorpus::resampled(const GridSpec& spec) const {
    std::vector<CorpusEntry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({e.label, e.generator, e.generator.sample(spec)});
    return TestCorpus(seed_, family_, spec, std::move(out));
}

TestCorpus make_corpus(std::uint64_t seed, CorpusFamily family, std::size_t count, const GridSpec& spec) {
    if (count < 1) throw ParameterError("make_corpus: count must be >= 1");
    Uniform rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(family) + 1)));
    std::vector<CorpusEntry> entries;
    entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CorpusGenerator g = family == CorpusFamily::band_limited ? band_limited(rng, spec) : blobs(rng, spec, family);
        char label[64];
        std::snprintf(label, sizeof label, "%s_%03zu", std::string(to_string(family)).c_str(), i);
        auto f = g.sample(spec);
        entries.push_back({label, std::move(g), std::move(f)});
    }
    return TestCorpus(seed, family, spec, std::move(entries));
}

}  // namespace lpkit
