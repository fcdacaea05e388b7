#include "sumlab/gridset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sumlab {

Scale::Scale(int m) : m_(m) {
  if (m < kMinExponent || m > kMaxExponent)
    throw std::invalid_argument("scale exponent m=" + std::to_string(m) + " outside [1, 24]");
}

double Scale::delta() const { return std::ldexp(1.0, -m_); }

namespace {

void require_strictly_increasing(std::span<const Index> v, const char* what) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] <= v[k - 1]) throw std::invalid_argument(std::string(what) + ": indices not strictly increasing");
}

}  // namespace

DiscretizedSet::DiscretizedSet(Scale scale, std::vector<Index> indices)
    : scale_(scale), indices_(std::move(indices)) {
  require_strictly_increasing(indices_, "DiscretizedSet");
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() > scale_.steps()))
    throw std::invalid_argument("DiscretizedSet: value outside [0,1]");
}

DiscretizedSet DiscretizedSet::from_unsorted(Scale scale, std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return DiscretizedSet(scale, std::move(indices));
}

bool DiscretizedSet::contains(Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

GridSet::GridSet(Scale scale, Index offset, std::vector<Index> indices)
    : scale_(scale), offset_(offset), indices_(std::move(indices)) {
  require_strictly_increasing(indices_, "GridSet");
  if (!indices_.empty() && indices_.front() < 0) throw std::invalid_argument("GridSet: negative index");
}

GridSet::GridSet(const DiscretizedSet& set)
    : scale_(set.scale()), offset_(0), indices_(set.indices().begin(), set.indices().end()) {}

GridSet GridSet::from_positions(Scale scale, std::vector<Index> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  Index offset = positions.empty() ? 0 : -positions.front();
  for (auto& p : positions) p += offset;
  return GridSet(scale, offset, std::move(positions));
}

std::vector<Index> GridSet::positions() const {
  std::vector<Index> out(indices_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = position(k);
  return out;
}

DiscretizedSet GridSet::to_discretized() const { return DiscretizedSet(scale_, positions()); }

ValueMultiset::ValueMultiset(std::int64_t denominator, std::vector<Entry> entries)
    : denominator_(denominator), entries_(std::move(entries)) {
  if (denominator_ <= 0) throw std::invalid_argument("ValueMultiset: denominator must be positive");
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].multiplicity < 1) throw std::invalid_argument("ValueMultiset: multiplicity < 1");
    if (k > 0 && entries_[k].value <= entries_[k - 1].value)
      throw std::invalid_argument("ValueMultiset: values not strictly increasing");
  }
}

ValueMultiset ValueMultiset::from_values(std::int64_t denominator, std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < values.size();) {
    std::size_t j = k;
    while (j < values.size() && values[j] == values[k]) ++j;
    entries.push_back({values[k], static_cast<std::int64_t>(j - k)});
    k = j;
  }
  return ValueMultiset(denominator, std::move(entries));
}

std::int64_t ValueMultiset::total() const {
  std::int64_t t = 0;
  for (const auto& e : entries_) t += e.multiplicity;
  return t;
}

namespace {

// Number of distinct floor(p / 2^shift) over sorted signed positions.
std::size_t count_cells(std::span<const Index> sorted_positions, int shift, Index offset) {
  if (sorted_positions.empty()) return 0;
  if (shift <= 0) return sorted_positions.size();
  std::size_t cells = 0;
  Index last = 0;
  for (std::size_t k = 0; k < sorted_positions.size(); ++k) {
    Index cell = (sorted_positions[k] - offset) >> shift;  // arithmetic shift floors
    if (k == 0 || cell != last) ++cells;
    last = cell;
  }
  return cells;
}

}  // namespace

std::size_t covering_number(const DiscretizedSet& x, int level) {
  if (level < 0) throw std::invalid_argument("covering level must be >= 0");
  return count_cells(x.indices(), x.scale().m() - level, 0);
}

std::size_t covering_number(const GridSet& x, int level) {
  if (level < 0) throw std::invalid_argument("covering level must be >= 0");
  return count_cells(x.indices(), x.scale().m() - level, x.offset());
}

std::size_t covering_number(const ValueMultiset& x, int level) {
  if (level < 0 || level > 62) throw std::invalid_argument("covering level out of range");
  std::size_t cells = 0;
  i128 last = 0;
  bool first = true;
  for (const auto& e : x.entries()) {
    i128 cell = floor_div(static_cast<i128>(e.value) << level, x.denominator());
    if (first || cell != last) ++cells;
    last = cell;
    first = false;
  }
  return cells;
}

std::size_t covering_number(std::span<const Rational> values, int level) {
  if (level < 0) throw std::invalid_argument("covering level must be >= 0");
  std::size_t cells = 0;
  i128 last = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    i128 cell = values[k].floor_scaled(level);
    if (k == 0 || cell != last) ++cells;
    last = cell;
  }
  return cells;
}

std::size_t ball_count(const DiscretizedSet& x, const Rational& center, const Rational& radius) {
  if (radius.num() <= 0) throw std::invalid_argument("ball radius must be positive");
  // Elements i with (center - radius)·2^m <= i <= (center + radius)·2^m.
  const int m = x.scale().m();
  const i128 lo_idx = -(radius - center).floor_scaled(m);  // ceil((center - radius)·2^m)
  const i128 hi_idx = (center + radius).floor_scaled(m);
  if (hi_idx < lo_idx) return 0;
  auto idx = x.indices();
  auto first = std::lower_bound(idx.begin(), idx.end(), static_cast<Index>(std::max<i128>(lo_idx, -1)));
  auto last = std::upper_bound(idx.begin(), idx.end(),
                               static_cast<Index>(std::min<i128>(hi_idx, x.scale().steps() + 1)));
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, last - first));
}

FrostmanProfile frostman_profile(const DiscretizedSet& x, double sigma, int min_radius_level,
                                 int max_radius_level, double cap) {
  if (x.empty()) throw std::invalid_argument("empty set");
  const int m = x.scale().m();
  if (max_radius_level < 0 || max_radius_level > min_radius_level || min_radius_level > m)
    throw std::invalid_argument("frostman_profile: need delta <= r_min <= r_max <= 1");

  FrostmanProfile prof;
  prof.sigma = sigma;
  prof.cap = cap;
  prof.set_size = x.size();
  prof.best_exponent = std::numeric_limits<double>::infinity();
  const auto idx = x.indices();
  const double n = static_cast<double>(x.size());

  for (int level = max_radius_level; level <= min_radius_level; ++level) {
    // Closed ball of radius r = window of length 2r = 2^(m-level+1) grid steps.
    const Index span = Index{2} << (m - level);
    std::int64_t best = 0;
    std::size_t best_lo = 0, best_hi = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < idx.size(); ++lo) {
      if (hi < lo) hi = lo;
      while (hi + 1 < idx.size() && idx[hi + 1] - idx[lo] <= span) ++hi;
      auto count = static_cast<std::int64_t>(hi - lo + 1);
      if (count > best) {
        best = count;
        best_lo = lo;
        best_hi = hi;
      }
    }
    FrostmanRow row;
    row.level = level;
    row.radius = std::ldexp(1.0, -level);
    row.worst_center = std::ldexp(static_cast<double>(idx[best_lo] + idx[best_hi]), -m - 1);
    row.worst_count = best;
    row.ratio = static_cast<double>(best) / (std::pow(row.radius, sigma) * n);
    prof.max_ratio = std::max(prof.max_ratio, row.ratio);
    // count / (r^s' n) <= cap  <=>  s' <= log(cap n / count) / log(1/r)
    if (level > 0) {
      double bound = std::log(cap * n / static_cast<double>(best)) / (level * std::log(2.0));
      prof.best_exponent = std::min(prof.best_exponent, bound);
    } else if (static_cast<double>(best) > cap * n) {
      prof.best_exponent = -std::numeric_limits<double>::infinity();
    }
    prof.rows.push_back(row);
  }
  return prof;
}

FrostmanProfile frostman_profile(const DiscretizedSet& x, double sigma, double cap) {
  return frostman_profile(x, sigma, x.scale().m(), 0, cap);
}

std::vector<DoublingRow> multiscale_doubling_profile(const DiscretizedSet& x) {
  const auto idx = x.indices();
  std::vector<Index> sums;
  sums.reserve(idx.size() * idx.size());
  for (Index a : idx)
    for (Index b : idx) sums.push_back(a + b);
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  std::vector<DoublingRow> rows;
  const int m = x.scale().m();
  for (int level = m; level >= 0; --level) {
    DoublingRow row;
    row.level = level;
    row.sumset_cover = count_cells(sums, m - level, 0);
    row.set_cover = covering_number(x, level);
    row.ratio = row.set_cover == 0 ? 0.0
                                   : static_cast<double>(row.sumset_cover) / static_cast<double>(row.set_cover);
    rows.push_back(row);
  }
  return rows;
}

DiscretizedSet read_set(std::istream& in) {
  std::string line;
  int lineno = 0;
  int m = -1;
  std::vector<Index> indices;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (m < 0) {
      if (body.rfind("scale m=", 0) != 0)
        throw std::invalid_argument("set file line " + std::to_string(lineno) + ": expected 'scale m=<int>'");
      m = std::stoi(body.substr(8));
      continue;
    }
    std::size_t used = 0;
    long long v = std::stoll(body, &used);
    if (used != body.size())
      throw std::invalid_argument("set file line " + std::to_string(lineno) + ": malformed index '" + body + "'");
    indices.push_back(v);
  }
  if (m < 0) throw std::invalid_argument("set file: missing 'scale m=<int>' header");
  return DiscretizedSet(Scale(m), std::move(indices));
}

DiscretizedSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set file '" + path + "'");
  return read_set(in);
}

void write_set(std::ostream& out, const DiscretizedSet& x) {
  out << "scale m=" << x.scale().m() << '\n';
  for (Index i : x.indices()) out << i << '\n';
}

void write_set_file(const std::string& path, const DiscretizedSet& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write set file '" + path + "'");
  write_set(out, x);
}

}  // namespace sumlab
