#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "accentgram/dataset.hpp"
#include "accentgram/linalg.hpp"

namespace accentgram::mv {

struct ScatterMatrices {
  Matrix between;  // B = Σ n_i (x̄_i − x̄)(x̄_i − x̄)ᵀ
  Matrix within;   // W = Σ_i Σ_j (x_ij − x̄_i)(x_ij − x̄_i)ᵀ
  Matrix pooled;   // W / (N − g)
  Matrix total;    // Σ_j (x_j − x̄)(x_j − x̄)ᵀ
  std::size_t n = 0;
  std::size_t groups = 2;
};

ScatterMatrices scatter_matrices(const GroupedData& data);

struct ManovaResult {
  double pillai_v = 0.0;
  double f_stat = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
  double partial_eta_sq = 0.0;  // V / s
  double box_m = 0.0;
  double box_chi2 = 0.0;
  double box_df = 0.0;
  double box_p = 1.0;
};

/// F-approximation for a given Pillai trace. `n` total observations, `g`
/// groups, `p` dependent variables. Fills the Pillai fields only.
ManovaResult pillai_f_approximation(double pillai_v, std::size_t n, std::size_t g, std::size_t p);

/// V = trace(B (B + W)⁻¹) plus its F-approximation.
ManovaResult pillai_manova(const Matrix& between, const Matrix& within, std::size_t n, std::size_t g);

/// Σ λ/(1 + λ) over the eigenvalues of W⁻¹B; an independent route to Pillai's V.
double pillai_from_eigenvalues(const Matrix& between, const Matrix& within);

/// Eigenvalues (descending) of W⁻¹B via the symmetric form L⁻¹ B L⁻ᵀ, W = L Lᵀ.
std::vector<double> discriminant_eigenvalues(const Matrix& between, const Matrix& within);

struct BoxMResult {
  double m = 0.0;
  double chi2 = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Box's M test of equal group covariance matrices with the χ² approximation.
BoxMResult box_m(const GroupedData& data);

/// Box's M plus Pillai MANOVA in one result.
ManovaResult manova(const GroupedData& data);

struct CdaResult {
  double eigenvalue = 0.0;
  std::vector<double> raw_coeffs;  // aᵀ S_pooled a = 1
  std::vector<double> std_coeffs;  // a_j · sqrt(S_pooled_jj)
  std::vector<double> scores;      // aᵀ (x − x̄), per row of the input
  std::array<double, 2> centroids{};
  double canonical_correlation = 0.0;
};

/// Canonical discriminant function for two groups. Sign is fixed so that the
/// largest-magnitude standardized coefficient is positive.
CdaResult cda(const GroupedData& data);

}  // namespace accentgram::mv
