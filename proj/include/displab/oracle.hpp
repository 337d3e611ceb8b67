#pragma once

// Query models over hidden convex bodies. Every query goes through a
// Transcript, so the number of queries an algorithm used is the transcript
// length, and a run can be replayed against another body.
//
// Rows are 0-based: Violation(row 0, +1) reports the first row, written
// (1, +1) in 1-based notation.

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "displab/error.hpp"
#include "displab/geom.hpp"
#include "displab/rng.hpp"

namespace displab::oracle {

using geom::Matrix;
using geom::Vector;

struct QueryAnswer {
  enum class Kind { Yes, No, Violation };

  Kind kind = Kind::Yes;
  std::size_t row = 0;  // Violation only: least violated row
  int sign = 0;         // Violation only: sign of A_row . q

  static QueryAnswer yes() { return {Kind::Yes, 0, 0}; }
  static QueryAnswer no() { return {Kind::No, 0, 0}; }
  static QueryAnswer violation(std::size_t row, int sign) { return {Kind::Violation, row, sign}; }

  bool accepted() const { return kind == Kind::Yes; }
  bool operator==(const QueryAnswer&) const = default;
};

enum class QueryKind { Membership, Modified, EntryThreshold };

struct QueryRecord {
  QueryKind kind = QueryKind::Membership;
  Vector point;             // Membership / Modified
  std::size_t row = 0;      // EntryThreshold
  std::size_t col = 0;      // EntryThreshold
  double threshold = 0.0;   // EntryThreshold
  QueryAnswer answer;

  bool operator==(const QueryRecord&) const = default;
};

class Transcript {
 public:
  void record(QueryRecord r) { records_.push_back(std::move(r)); }
  std::size_t count() const { return records_.size(); }
  const std::vector<QueryRecord>& records() const { return records_; }
  void clear() { records_.clear(); }

  bool operator==(const Transcript&) const = default;

 private:
  std::vector<QueryRecord> records_;
};

std::string transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const std::string& text);

template <class B>
concept ConvexBody = requires(const B& b, std::span<const double> x) {
  { b.contains(x) } -> std::convertible_to<bool>;
  { b.dim() } -> std::convertible_to<std::size_t>;
};

// Standard membership oracle Q.
template <ConvexBody B>
bool membership_query(const B& body, std::span<const double> q, Transcript& t) {
  if (q.size() != body.dim()) throw DimensionMismatch("membership_query: dimension mismatch");
  const bool inside = body.contains(q);
  t.record({QueryKind::Membership, Vector(q.begin(), q.end()), 0, 0, 0.0,
            inside ? QueryAnswer::yes() : QueryAnswer::no()});
  return inside;
}

// Q' answer without recording: Yes iff ||Aq||_inf <= 1, otherwise the least
// row with |A_i q| > 1 and the sign of A_i q.
QueryAnswer modified_answer(const Matrix& a, std::span<const double> q);

// Modified oracle Q' for the parallelopiped {x : ||Ax||_inf <= 1}.
QueryAnswer modified_query(const geom::Parallelopiped& body, std::span<const double> q, Transcript& t);

// Entry oracle: is A(row, col) <= threshold?
bool entry_threshold_query(const Matrix& a, std::size_t row, std::size_t col, double threshold, Transcript& t);

// Re-asks every recorded query against `body` and reports whether all
// answers agree. Entry queries are checked against body.a.
bool replay_matches(const Transcript& t, const geom::Parallelopiped& body);

enum class BaseDomain { Ball, Cube };

struct RowConstraint {
  enum class Kind { Within, Above, Below };  // |v.x| <= 1, v.x > 1, v.x < -1

  Vector v;
  Kind kind = Kind::Within;

  bool satisfied(std::span<const double> x) const;
};

// Feasible set for one row: the base domain (ball of radius sqrt(n) or the
// cube [-1,1]^n) cut by linear constraints.
struct RowRegion {
  std::size_t n = 0;
  BaseDomain base = BaseDomain::Ball;
  std::vector<RowConstraint> constraints;

  bool in_base(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;
  double base_volume() const;
};

// Product set along rows: M is in the part iff row i of M is in rows[i].
struct ProductPart {
  std::vector<RowRegion> rows;

  static ProductPart full(std::size_t n, BaseDomain base);
  std::size_t dim() const { return rows.size(); }
  bool contains(const Matrix& m) const;
};

// Conditions the part on the Q' answer `ans` to query q. Yes adds
// |R_j . q| <= 1 to every row; Violation(i, s) adds it to rows j < i and
// s (R_i . q) > 1 to row i. Plain No answers do not keep the product
// structure and are rejected.
ProductPart refine_product_part(const ProductPart& part, std::span<const double> q, const QueryAnswer& ans);

// Folds every Modified query of a transcript into a fresh part.
ProductPart fold_transcript(const Transcript& t, std::size_t n, BaseDomain base);

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Rejection estimate of vol(rows[i]) from uniform proposals in the base domain.
VolumeEstimate part_row_volume(const ProductPart& part, std::size_t i, std::size_t samples, RngStream& rng);

}  // namespace displab::oracle
