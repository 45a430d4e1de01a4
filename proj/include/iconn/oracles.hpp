#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "iconn/spectral.hpp"
#include "iconn/var_model.hpp"

namespace iconn::oracles {

// Independent right-hand sides for the coherence identities behind iPDC and
// iDTF. Nothing in here calls into measures.hpp; agreement with those
// formulas is what the tests check. Channel indices are zero-based.

/// Coherence between innovation w_i and partialized process eta_j, from the
/// full cross-spectrum expansion
///   S_{w_i eta_j} = sum_l Ā_il (S_{x_l x_j} - s_{x_l x^j} S_{x^j x^j}^{-1} s_{x^j x_j}),
/// normalized by sqrt(sigma_ii S_{eta_j eta_j}).
std::vector<Complex> theorem1_rhs(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j);

/// Coherence between x_i and the partialized innovation zeta_j, using
/// S_{x_i zeta_j} = sum_l H̄_il cov(w_l, zeta_j) and the autospectrum S_{x_i x_i}
/// read off the spectral matrix.
std::vector<Complex> theorem2_rhs(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j);

/// S_{x_l x_j} - s_{x_l x^j} S_{x^j x^j}^{-1} s_{x^j x_j} at grid point f; the
/// cross-spectrum between x_l and eta_j. Zero for l != j.
Complex orthogonality_bracket(const SpectralSet& spectra, std::size_t f, std::size_t l,
                              std::size_t j);

/// max_w |Ā_ij(w) - S_{w_i eta_j}(w) / S_{eta_j eta_j}(w)|.
double transfer_function_identity(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j);

/// Stable VAR(p) with spectral radius < max_radius and sigma = G G^T + 0.1 I.
VarModel random_stable_model(std::size_t channels, std::size_t order, std::mt19937_64& rng,
                             double max_radius = 0.9);

/// Closed-form value table of one quantity on a grid; i, j zero-based.
struct FixtureTable {
    std::string quantity;  // "ipdc", "idtf", "s", "partial", "wiener"
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<Complex> values;
};

struct Fixture {
    std::string name;
    VarModel model;
    std::vector<FixtureTable> tables;

    const FixtureTable& table(std::string_view quantity, std::size_t i, std::size_t j) const;
};

/// "two_var_alpha" (alpha) or "three_var_alpha_beta" (alpha, beta).
Fixture fixture(std::string_view name, double alpha, double beta, const FrequencyGrid& grid);

}  // namespace iconn::oracles
