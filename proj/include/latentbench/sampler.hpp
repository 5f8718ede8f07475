#pragma once

#include "latentbench/graph.hpp"
#include "latentbench/param.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace latentbench {

enum class NoiseDist { gaussian, uniform, laplace };

std::string to_string(NoiseDist dist);
/// Throws ConfigInvalid for unknown names.
NoiseDist parse_noise_dist(std::string_view name);

/// Zero-mean noise with the given per-vertex variances. Uniform half-width
/// and Laplace scale are derived so the variance matches exactly.
struct NoiseSpec {
    NoiseDist dist = NoiseDist::gaussian;
    Vector variance;

    void validate() const;
};

struct Dataset {
    std::vector<std::string> names;
    std::vector<int> vertices;
    Matrix values;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

/// Noise matrix (samples x vertices). Entry (r, v) depends only on
/// (seed, r, v), so `threads` changes nothing but speed.
Matrix draw_noise(const NoiseSpec& noise, int samples, std::uint64_t seed, int threads = 1);

/// Y_v = sum_{u in pa(v)} W(v, u) Y_u + eps_v, evaluated in topological order.
Matrix ancestral_sample(const Dag& dag, const NoiseSpec& noise, int samples, std::uint64_t seed,
                        int threads = 1);
/// Same recursion on a precomputed noise matrix.
Matrix ancestral_from_noise(const Dag& dag, const Matrix& noise);

/// Y = (I - W)^-1 eps row by row. Throws InvariantViolation when Omega is not
/// diagonal, since shared noise only makes sense for independent errors.
Matrix solve_sample_oracle(const ImplicitModel& m, const Matrix& noise);

/// Samples an explicit model by drawing xi and eps independently and running
/// the block DAG, then dropping the latent columns.
Matrix sample_explicit(const ExplicitModel& m, NoiseDist dist, int samples, std::uint64_t seed,
                       int threads = 1);

/// Observed columns in index order, named X<index>.
Dataset hide_columns(const Matrix& full, const VertexSet& hidden);

}  // namespace latentbench
