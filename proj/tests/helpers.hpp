#pragma once

#include <numeric>
#include <vector>

#include "sumlab/gridset.hpp"

namespace testing {

using sumlab::DiscretizedSet;
using sumlab::Index;
using sumlab::Scale;

inline DiscretizedSet make(int m, std::vector<Index> idx) { return DiscretizedSet::from_unsorted(Scale(m), std::move(idx)); }

// {start, start + step, ...}, `length` points.
inline DiscretizedSet ap(int m, Index length, Index step = 1, Index start = 0) {
  std::vector<Index> v;
  for (Index i = 0; i < length; ++i) v.push_back(start + i * step);
  return make(m, std::move(v));
}

// Index of the grid value 1 at scale m: the dilation factor for c = 1.
inline Index one(int m) { return Index{1} << m; }

}  // namespace testing
