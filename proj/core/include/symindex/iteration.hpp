#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

#include "symindex/normal_form.hpp"

namespace symindex {

// Initial data of a symplectic path gamma with gamma(0) = I: its index
// i(gamma), nullity nu(gamma), and the normal form of the endpoint matrix.
class PathSeed {
 public:
  // Requires n >= 2 and nu1 = p- + 2 p0 + p+ (the 1-eigenspace dimension of
  // the endpoint normal form); throws InvalidInput otherwise.
  PathSeed(std::int64_t i1, int nu1, Decomposition decomposition);

  int n() const { return decomposition_.n(); }
  std::int64_t initial_index() const { return i1_; }
  int initial_nullity() const { return nu1_; }
  const Decomposition& decomposition() const { return decomposition_; }
  const Census& census() const { return decomposition_.census(); }

 private:
  std::int64_t i1_;
  int nu1_;
  Decomposition decomposition_;
};

struct IterationRow {
  std::int64_t m = 0;
  std::int64_t index = 0;
  std::int64_t nullity = 0;
  bool operator==(const IterationRow&) const = default;
};

// i(gamma^m) from the iteration formula on the normal form of gamma(tau).
std::int64_t index_iterate(const PathSeed& seed, std::int64_t m, int budget = refinement_budget());

// nu(gamma^m).
std::int64_t nullity_iterate(const PathSeed& seed, std::int64_t m, int budget = refinement_budget());

IterationRow iteration_row(const PathSeed& seed, std::int64_t m, int budget = refinement_budget());

// Mean index i1 + p- + p0 - r + sum_j theta_j / pi, the slope of the index
// iteration. Exact when every rotation angle is rational; otherwise an
// enclosure that tightens with `step`.
Interval mean_index(const PathSeed& seed, int step = 0);

// Certified sign of (mean index - threshold).
int compare_mean_index(const PathSeed& seed, const Rational& threshold, int budget = refinement_budget());

// Mean index enclosed to width <= tolerance (exact when possible).
Interval mean_index_within(const PathSeed& seed, const Rational& tolerance, int budget = refinement_budget());

// i(gamma^{m+1}) - i(gamma^m) - nu(gamma^m). For paths with i1 >= n - 1
// this is bounded below by i1 - e/2.
std::int64_t bott_gap(const PathSeed& seed, std::int64_t m, int budget = refinement_budget());

// Rows m = 1..m_max, computed only when dereferenced.
class IterationTable {
 public:
  IterationTable(const PathSeed& seed, std::int64_t m_max) : seed_(&seed), m_max_(m_max) {}

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = IterationRow;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = IterationRow;

    iterator() = default;
    iterator(const PathSeed* seed, std::int64_t m) : seed_(seed), m_(m) {}
    IterationRow operator*() const { return iteration_row(*seed_, m_); }
    iterator& operator++() {
      ++m_;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++m_;
      return old;
    }
    bool operator==(const iterator& other) const { return m_ == other.m_; }

   private:
    const PathSeed* seed_ = nullptr;
    std::int64_t m_ = 1;
  };

  iterator begin() const { return {seed_, 1}; }
  iterator end() const { return {seed_, m_max_ + 1}; }
  std::int64_t size() const { return m_max_; }

 private:
  const PathSeed* seed_;
  std::int64_t m_max_;
};

// Materializes rows 1..m_max, split across `workers` threads. The result does
// not depend on the worker count.
std::vector<IterationRow> iteration_table(const PathSeed& seed, std::int64_t m_max, int workers = 1);

}  // namespace symindex
