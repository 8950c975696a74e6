#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace railtap {

enum class DistanceKind { L2, L1, COSINE, PEARSON };

std::string_view to_token(DistanceKind kind);
std::optional<DistanceKind> distance_kind_from_token(std::string_view token);

/// Distance between two equal-length non-empty vectors. COSINE is
/// 1 - cosine similarity and rejects zero vectors; PEARSON is
/// 1 - correlation and rejects constant vectors. Element-wise identical
/// inputs return exactly 0.0; every result is nonnegative.
double distance(std::span<const double> a, std::span<const double> b,
                DistanceKind kind);

/// Dense symmetric pairwise distance matrix with a zero diagonal. Each cell
/// equals distance(vectors[i], vectors[j], kind).
struct SimilarityMatrix {
  DistanceKind kind = DistanceKind::L2;
  std::vector<std::string> labels;
  std::vector<double> values;  // row-major n x n

  std::size_t n() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * n() + j];
  }
};

SimilarityMatrix pairwise_matrix(std::span<const std::vector<double>> vectors,
                                 std::span<const std::string> labels,
                                 DistanceKind kind);

/// Mean of the strict upper triangle. Error{INSUFFICIENT_SUPPORT} when the
/// matrix has fewer than two rows (no pairs to average).
double coherence(const SimilarityMatrix& matrix);

/// Labeled square CSV: header `label,<l0>,...`, one row per label. Values
/// are printed with round-trip precision.
void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix);
SimilarityMatrix read_matrix_csv(std::istream& in,
                                 std::string_view origin = "<stream>");

/// Shortest decimal form that parses back to the same double.
std::string format_double_exact(double value);

}  // namespace railtap
