#include "displab/oracle.hpp"

#include <cmath>

#include "json.hpp"
#include "displab/sampling.hpp"

namespace displab::oracle {

using nlohmann::json;

QueryAnswer modified_answer(const Matrix& a, std::span<const double> q) {
  if (q.size() != a.cols()) throw DimensionMismatch("modified_query: dimension mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double v = geom::dot(a.row(i), q);
    // |A_i q| = 1 exactly counts as satisfied.
    if (std::abs(v) > 1.0) return QueryAnswer::violation(i, v > 0.0 ? 1 : -1);
  }
  return QueryAnswer::yes();
}

QueryAnswer modified_query(const geom::Parallelopiped& body, std::span<const double> q, Transcript& t) {
  const QueryAnswer ans = modified_answer(body.a, q);
  t.record({QueryKind::Modified, Vector(q.begin(), q.end()), 0, 0, 0.0, ans});
  return ans;
}

bool entry_threshold_query(const Matrix& a, std::size_t row, std::size_t col, double threshold, Transcript& t) {
  if (row >= a.rows() || col >= a.cols()) throw PreconditionViolation("entry_threshold_query: index out of range");
  const bool below = a(row, col) <= threshold;
  t.record({QueryKind::EntryThreshold, {}, row, col, threshold, below ? QueryAnswer::yes() : QueryAnswer::no()});
  return below;
}

bool replay_matches(const Transcript& t, const geom::Parallelopiped& body) {
  for (const auto& r : t.records()) {
    QueryAnswer again;
    switch (r.kind) {
      case QueryKind::Membership:
        again = body.contains(r.point) ? QueryAnswer::yes() : QueryAnswer::no();
        break;
      case QueryKind::Modified:
        again = modified_answer(body.a, r.point);
        break;
      case QueryKind::EntryThreshold:
        again = body.a(r.row, r.col) <= r.threshold ? QueryAnswer::yes() : QueryAnswer::no();
        break;
    }
    if (!(again == r.answer)) return false;
  }
  return true;
}

namespace {

const char* kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Membership: return "membership";
    case QueryKind::Modified: return "modified";
    case QueryKind::EntryThreshold: return "entry";
  }
  return "?";
}

QueryKind kind_from(const std::string& s) {
  if (s == "membership") return QueryKind::Membership;
  if (s == "modified") return QueryKind::Modified;
  if (s == "entry") return QueryKind::EntryThreshold;
  throw Error("transcript: unknown query kind '" + s + "'");
}

json answer_json(const QueryAnswer& a) {
  switch (a.kind) {
    case QueryAnswer::Kind::Yes: return json{{"kind", "yes"}};
    case QueryAnswer::Kind::No: return json{{"kind", "no"}};
    case QueryAnswer::Kind::Violation: return json{{"kind", "violation"}, {"row", a.row}, {"sign", a.sign}};
  }
  return {};
}

QueryAnswer answer_from(const json& j) {
  const auto k = j.at("kind").get<std::string>();
  if (k == "yes") return QueryAnswer::yes();
  if (k == "no") return QueryAnswer::no();
  if (k == "violation") return QueryAnswer::violation(j.at("row").get<std::size_t>(), j.at("sign").get<int>());
  throw Error("transcript: unknown answer kind '" + k + "'");
}

}  // namespace

std::string transcript_to_json(const Transcript& t) {
  json queries = json::array();
  for (const auto& r : t.records()) {
    json q = {{"kind", kind_name(r.kind)}};
    if (r.kind == QueryKind::EntryThreshold) {
      q["row"] = r.row;
      q["col"] = r.col;
      q["threshold"] = r.threshold;
    } else {
      q["point"] = r.point;
    }
    q["answer"] = answer_json(r.answer);
    queries.push_back(std::move(q));
  }
  return json{{"count", t.count()}, {"queries", std::move(queries)}}.dump(2);
}

Transcript transcript_from_json(const std::string& text) {
  const json j = json::parse(text);
  Transcript t;
  for (const auto& q : j.at("queries")) {
    QueryRecord r;
    r.kind = kind_from(q.at("kind").get<std::string>());
    if (r.kind == QueryKind::EntryThreshold) {
      r.row = q.at("row").get<std::size_t>();
      r.col = q.at("col").get<std::size_t>();
      r.threshold = q.at("threshold").get<double>();
    } else {
      r.point = q.at("point").get<Vector>();
    }
    r.answer = answer_from(q.at("answer"));
    t.record(std::move(r));
  }
  if (j.contains("count") && j.at("count").get<std::size_t>() != t.count())
    throw Error("transcript: count field disagrees with query list");
  return t;
}

bool RowConstraint::satisfied(std::span<const double> x) const {
  const double s = geom::dot(v, x);
  switch (kind) {
    case Kind::Within: return std::abs(s) <= 1.0;
    case Kind::Above: return s > 1.0;
    case Kind::Below: return s < -1.0;
  }
  return false;
}

bool RowRegion::in_base(std::span<const double> x) const {
  if (base == BaseDomain::Ball) return geom::norm_sq(x) <= static_cast<double>(n);
  for (double c : x)
    if (std::abs(c) > 1.0) return false;
  return true;
}

bool RowRegion::contains(std::span<const double> x) const {
  if (x.size() != n) throw DimensionMismatch("RowRegion: dimension mismatch");
  if (!in_base(x)) return false;
  for (const auto& c : constraints)
    if (!c.satisfied(x)) return false;
  return true;
}

double RowRegion::base_volume() const {
  if (base == BaseDomain::Ball) return geom::ball_volume(n, std::sqrt(static_cast<double>(n)));
  return std::ldexp(1.0, static_cast<int>(n));
}

ProductPart ProductPart::full(std::size_t n, BaseDomain base) {
  ProductPart p;
  p.rows.assign(n, RowRegion{n, base, {}});
  return p;
}

bool ProductPart::contains(const Matrix& m) const {
  if (m.rows() != rows.size()) throw DimensionMismatch("ProductPart: row count mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].contains(m.row(i))) return false;
  return true;
}

ProductPart refine_product_part(const ProductPart& part, std::span<const double> q, const QueryAnswer& ans) {
  if (q.size() != part.dim()) throw DimensionMismatch("refine_product_part: dimension mismatch");
  ProductPart out = part;
  const Vector v(q.begin(), q.end());
  switch (ans.kind) {
    case QueryAnswer::Kind::Yes:
      for (auto& r : out.rows) r.constraints.push_back({v, RowConstraint::Kind::Within});
      break;
    case QueryAnswer::Kind::Violation:
      if (ans.row >= out.dim()) throw PreconditionViolation("refine_product_part: violation row out of range");
      for (std::size_t j = 0; j < ans.row; ++j) out.rows[j].constraints.push_back({v, RowConstraint::Kind::Within});
      out.rows[ans.row].constraints.push_back(
          {v, ans.sign > 0 ? RowConstraint::Kind::Above : RowConstraint::Kind::Below});
      break;
    case QueryAnswer::Kind::No:
      throw PreconditionViolation("refine_product_part: plain membership answers do not preserve product structure");
  }
  return out;
}

ProductPart fold_transcript(const Transcript& t, std::size_t n, BaseDomain base) {
  ProductPart part = ProductPart::full(n, base);
  for (const auto& r : t.records())
    if (r.kind == QueryKind::Modified) part = refine_product_part(part, r.point, r.answer);
  return part;
}

VolumeEstimate part_row_volume(const ProductPart& part, std::size_t i, std::size_t samples, RngStream& rng) {
  if (i >= part.dim()) throw PreconditionViolation("part_row_volume: row index out of range");
  if (samples == 0) throw PreconditionViolation("part_row_volume: need at least one sample");
  const RowRegion& region = part.rows[i];
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = region.base == BaseDomain::Ball
                         ? sampling::uniform_ball(region.n, std::sqrt(static_cast<double>(region.n)), rng)
                         : sampling::uniform_cube(region.n, rng);
    if (region.contains(x)) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  const double base = region.base_volume();
  return {base * frac, base * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

}  // namespace displab::oracle
