// Copyright 2026 The drbm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drbm/coding.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <stdexcept>

#include "drbm/exact_rank.hpp"

namespace drbm {

namespace {

// Fixed-width bitset over the states of a space.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return n_;
  }
  Bits& operator&=(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Bits& minus(const Bits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }
  std::size_t and_count(const Bits& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) c += static_cast<std::size_t>(std::popcount(w_[k] & o.w_[k]));
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

std::vector<State> all_states(const StateSpace& space) {
  std::vector<State> s(space.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = space.state(i);
  return s;
}

int dist(const State& a, const State& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

constexpr std::size_t kMaxSearchStates = 4096;

// Maximum clique with greedy-colouring bounds (Tomita-style).
class MaxClique {
 public:
  MaxClique(std::vector<Bits> adj, std::size_t upper, std::uint64_t budget)
      : adj_(std::move(adj)), upper_(upper), budget_(budget) {}

  void seed(std::vector<std::size_t> clique) { best_ = std::move(clique); }

  // Searches cliques containing `root`.
  bool run(std::size_t root) {
    current_.assign(1, root);
    Bits cand = adj_[root];
    if (best_.size() < 1) best_ = current_;
    expand(cand);
    return !aborted_;
  }

  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void expand(Bits cand) {
    if (aborted_ || best_.size() >= upper_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    {
      Bits uncoloured = cand;
      std::size_t k = 0;
      while (uncoloured.any()) {
        ++k;
        Bits q = uncoloured;
        while (q.any()) {
          const std::size_t v = q.first();
          q.reset(v);
          uncoloured.reset(v);
          q.minus(adj_[v]);
          order.push_back(v);
          colour.push_back(k);
        }
      }
    }
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (current_.size() + colour[idx] <= best_.size()) return;
      const std::size_t v = order[idx];
      current_.push_back(v);
      Bits next = cand;
      next &= adj_[v];
      if (!next.any()) {
        if (current_.size() > best_.size()) best_ = current_;
      } else {
        expand(next);
      }
      current_.pop_back();
      if (aborted_ || best_.size() >= upper_) return;
      cand.reset(v);
    }
  }

  std::vector<Bits> adj_;
  std::size_t upper_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  unsigned __int128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("q^n does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

unsigned __int128 binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

// Finite field GF(q) for prime powers q <= 9.
class FiniteField {
 public:
  explicit FiniteField(int q) : q_(q) {
    int p = 0, e = 0;
    for (int c = 2; c <= q; ++c)
      if (q % c == 0) {
        p = c;
        break;
      }
    for (int v = q; v > 1; v /= p) ++e;
    // irreducible polynomials (low coefficient first, monic degree e)
    std::vector<int> poly;
    if (e == 1) poly = {0, 1};
    else if (q == 4) poly = {1, 1, 1};
    else if (q == 8) poly = {1, 1, 0, 1};
    else if (q == 9) poly = {1, 0, 1};
    else throw std::invalid_argument("finite fields are supported for prime powers up to 9");
    add_.assign(q * q, 0);
    mul_.assign(q * q, 0);
    auto digits = [&](int a) {
      std::vector<int> d(e, 0);
      for (int k = 0; k < e; ++k) {
        d[k] = a % p;
        a /= p;
      }
      return d;
    };
    auto number = [&](const std::vector<int>& d) {
      int a = 0;
      for (int k = e; k-- > 0;) a = a * p + d[k];
      return a;
    };
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        const auto da = digits(a), db = digits(b);
        std::vector<int> s(e);
        for (int k = 0; k < e; ++k) s[k] = (da[k] + db[k]) % p;
        add_[a * q + b] = number(s);
        std::vector<int> prod(2 * e, 0);
        for (int i = 0; i < e; ++i)
          for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        if (e == 1) {
          mul_[a * q + b] = prod[0];
          continue;
        }
        for (int k = 2 * e - 1; k >= e; --k) {
          const int c = prod[k];
          if (!c) continue;
          for (int l = 0; l <= e; ++l) prod[k - e + l] = ((prod[k - e + l] - c * poly[l]) % p + p) % p;
        }
        prod.resize(e);
        mul_[a * q + b] = number(prod);
      }
  }
  int add(int a, int b) const { return add_[a * q_ + b]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int neg(int a) const {
    for (int b = 0; b < q_; ++b)
      if (add(a, b) == 0) return b;
    return 0;
  }

 private:
  int q_;
  std::vector<int> add_;
  std::vector<int> mul_;
};

}  // namespace

// ---------------------------------------------------------------------------

Code::Code(StateSpace space, std::vector<std::size_t> words)
    : space_(std::move(space)), words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  if (words_.empty()) throw std::invalid_argument("a code needs at least one word");
  if (words_.back() >= space_.size()) throw std::out_of_range("code word outside the state space");

  std::vector<State> w(words_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = space_.state(words_[i]);
  if (w.size() > 1) {
    int md = std::numeric_limits<int>::max();
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b) md = std::min(md, dist(w[a], w[b]));
    min_distance_ = md;
  }
  // multi-source breadth-first search on the Hamming graph
  std::vector<int> d(space_.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t x : words_) {
    d[x] = 0;
    queue.push_back(x);
  }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    State s = space_.state(x);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int orig = s[i];
      for (int v = 0; v < space_.card(i); ++v) {
        if (v == orig) continue;
        s[i] = v;
        const std::size_t y = space_.index(s);
        if (d[y] < 0) {
          d[y] = d[x] + 1;
          queue.push_back(y);
        }
      }
      s[i] = orig;
    }
  }
  covering_radius_ = *std::max_element(d.begin(), d.end());
}

bool Code::contains(std::size_t state) const {
  return std::binary_search(words_.begin(), words_.end(), state);
}

std::size_t distance_two_code_size(const StateSpace& space) {
  int rmax = 0;
  for (int r : space.cards()) rmax = std::max(rmax, r);
  return space.size() / static_cast<std::size_t>(rmax);
}

bool is_prime_power(int q) {
  if (q < 2) return false;
  int p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

std::uint64_t gilbert_varshamov(int q, int n, int d) {
  if (q < 2 || n < 1 || d < 1 || d > n) throw std::invalid_argument("gilbert_varshamov needs q >= 2 and 1 <= d <= n");
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(q), n);
  if (d == 1) return total;
  unsigned __int128 vol = 0;
  for (int j = 0; j <= d - 1; ++j) vol += binom(n, j) * checked_pow(static_cast<std::uint64_t>(q - 1), j);
  std::uint64_t bound = static_cast<std::uint64_t>((total + vol - 1) / vol);
  if (is_prime_power(q)) {
    unsigned __int128 s = 0;
    for (int j = 0; j <= d - 2; ++j) s += binom(n - 1, j) * checked_pow(static_cast<std::uint64_t>(q - 1), j);
    unsigned __int128 qk = 1;
    std::uint64_t best = 0;
    for (int k = 0; k <= n; ++k) {
      if (qk * s < total) best = static_cast<std::uint64_t>(qk);
      else break;
      qk *= static_cast<unsigned>(q);
    }
    bound = std::max(bound, best);
  }
  return bound;
}

Code hamming_code(int q, int r) {
  if (!is_prime_power(q)) throw std::invalid_argument("hamming_code: q must be a prime power");
  if (r < 2) throw std::invalid_argument("hamming_code: r must be at least 2");
  const FiniteField field(q);
  // columns of the parity-check matrix: nonzero vectors with leading one
  std::vector<std::vector<int>> cols;
  const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(q), r);
  for (std::uint64_t v = 1; v < count; ++v) {
    std::vector<int> col(r);
    std::uint64_t a = v;
    for (int k = r; k-- > 0;) {
      col[k] = static_cast<int>(a % static_cast<std::uint64_t>(q));
      a /= static_cast<std::uint64_t>(q);
    }
    int lead = 0;
    for (int x : col)
      if (x) {
        lead = x;
        break;
      }
    if (lead == 1) cols.push_back(col);
  }
  const int n = static_cast<int>(cols.size());
  const StateSpace space(std::vector<int>(n, q));
  if (space.size() > (std::size_t{1} << 24)) throw InstanceTooLarge("hamming_code: ambient space too large");
  std::vector<int> check_pos(r, -1);
  std::vector<int> info_pos;
  for (int c = 0; c < n; ++c) {
    int ones = 0, where = -1;
    bool unit = true;
    for (int k = 0; k < r; ++k) {
      if (cols[c][k] == 1) {
        ++ones;
        where = k;
      } else if (cols[c][k] != 0) {
        unit = false;
      }
    }
    if (unit && ones == 1 && check_pos[where] < 0) check_pos[where] = c;
    else info_pos.push_back(c);
  }
  const std::uint64_t messages = checked_pow(static_cast<std::uint64_t>(q), n - r);
  std::vector<std::size_t> words;
  words.reserve(messages);
  State word(n, 0);
  for (std::uint64_t m = 0; m < messages; ++m) {
    std::uint64_t a = m;
    for (std::size_t t = info_pos.size(); t-- > 0;) {
      word[info_pos[t]] = static_cast<int>(a % static_cast<std::uint64_t>(q));
      a /= static_cast<std::uint64_t>(q);
    }
    for (int k = 0; k < r; ++k) {
      int s = 0;
      for (int c : info_pos) s = field.add(s, field.mul(cols[c][k], word[c]));
      word[check_pos[k]] = field.neg(s);
    }
    words.push_back(space.index(word));
  }
  return Code(space, std::move(words));
}

CodeSizeResult max_code_size(const StateSpace& space, int d, SearchBudget budget) {
  const std::size_t total = space.size();
  const int n = static_cast<int>(space.num_vars());
  CodeSizeResult res;
  if (d <= 1) {
    res = {total, true, "closed-form", {}};
    return res;
  }
  if (d > n) {
    res = {1, true, "closed-form", {0}};
    return res;
  }
  // global upper bounds: sphere packing and the Singleton-type deletion bound
  const std::size_t packing = total / ball_volume(space, (d - 1) / 2);
  std::vector<int> sorted = space.cards();
  std::sort(sorted.rbegin(), sorted.rend());
  std::size_t deletion = total;
  for (int k = 0; k < d - 1; ++k) deletion /= static_cast<std::size_t>(sorted[k]);
  const std::size_t upper = std::min(packing, deletion);

  if (total <= kMaxSearchStates) {
    const auto states = all_states(space);
    std::vector<Bits> adj(total, Bits(total));
    for (std::size_t a = 0; a < total; ++a)
      for (std::size_t b = a + 1; b < total; ++b)
        if (dist(states[a], states[b]) >= d) {
          adj[a].set(b);
          adj[b].set(a);
        }
    // lexicographic greedy code as the first incumbent
    std::vector<std::size_t> greedy;
    for (std::size_t x = 0; x < total; ++x) {
      bool ok = true;
      for (std::size_t w : greedy) ok = ok && adj[x].test(w);
      if (ok) greedy.push_back(x);
    }
    MaxClique mc(std::move(adj), upper, budget.max_nodes);
    mc.seed(greedy);
    // translations are isometries, so some optimal code contains state 0
    const bool finished = mc.run(0);
    res.value = mc.best().size();
    res.witness = mc.best();
    std::sort(res.witness.begin(), res.witness.end());
    res.exact = finished || res.value == upper;
    res.method = "search";
    return res;
  }
  // too large to search: closed forms, then lower bounds
  if (d == 2) {
    res = {distance_two_code_size(space), true, "closed-form", {}};
    return res;
  }
  bool uniform = std::all_of(space.cards().begin(), space.cards().end(),
                             [&](int r) { return r == space.card(0); });
  const int q = space.card(0);
  if (uniform && d == 3 && is_prime_power(q) && q <= 9) {
    for (int r = 2; r <= n; ++r) {
      const std::uint64_t len = (checked_pow(static_cast<std::uint64_t>(q), r) - 1) / static_cast<std::uint64_t>(q - 1);
      if (len == static_cast<std::uint64_t>(n)) {
        res = {static_cast<std::size_t>(checked_pow(static_cast<std::uint64_t>(q), n - r)), true, "perfect-code", {}};
        return res;
      }
    }
  }
  res.exact = false;
  res.method = "lower-bound";
  res.value = uniform ? static_cast<std::size_t>(gilbert_varshamov(q, n, d)) : 1;
  return res;
}

std::size_t covering_formula_sst(int s, int t) {
  if (s < 1 || t < s) throw std::invalid_argument("covering formula needs 1 <= s <= t");
  if (t <= 3 * s) return static_cast<std::size_t>(s * s - ((3 * s - t) * (3 * s - t)) / 8);
  return static_cast<std::size_t>(s * s);
}

namespace {

class CoverSearch {
 public:
  CoverSearch(std::vector<Bits> balls, std::size_t lower, std::uint64_t budget)
      : balls_(std::move(balls)), lower_(lower), budget_(budget) {}

  void seed(std::vector<std::size_t> cover) { best_ = std::move(cover); }

  bool run(std::size_t first_center) {
    Bits uncovered(balls_.size());
    for (std::size_t x = 0; x < balls_.size(); ++x) uncovered.set(x);
    uncovered.minus(balls_[first_center]);
    current_.assign(1, first_center);
    if (!uncovered.any()) {
      best_ = current_;
      return true;
    }
    expand(uncovered);
    return !aborted_;
  }

  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void expand(const Bits& uncovered) {
    if (aborted_ || best_.size() <= lower_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    const std::size_t left = uncovered.count();
    std::size_t reach = 0;
    for (const Bits& b : balls_) reach = std::max(reach, b.and_count(uncovered));
    if (current_.size() + (left + reach - 1) / reach >= best_.size()) return;
    // branch on the centres covering the first uncovered state
    const std::size_t e = uncovered.first();
    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t c = 0; c < balls_.size(); ++c)
      if (balls_[c].test(e)) options.emplace_back(balls_[c].and_count(uncovered), c);
    std::stable_sort(options.begin(), options.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, c] : options) {
      Bits next = uncovered;
      next.minus(balls_[c]);
      current_.push_back(c);
      if (!next.any()) {
        if (current_.size() < best_.size()) best_ = current_;
      } else {
        expand(next);
      }
      current_.pop_back();
      if (aborted_ || best_.size() <= lower_) return;
    }
  }

  std::vector<Bits> balls_;
  std::size_t lower_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

}  // namespace

CoveringResult min_covering_size(const StateSpace& space, int radius, SearchBudget budget) {
  CoveringResult res;
  const std::size_t total = space.size();
  if (radius >= static_cast<int>(space.num_vars())) {
    res = {1, true, {0}};
    return res;
  }
  if (radius < 0) throw std::invalid_argument("covering radius must be nonnegative");
  const std::size_t vol = ball_volume(space, radius);
  const std::size_t lower = (total + vol - 1) / vol;
  if (total > kMaxSearchStates) {
    res.exact = false;
    res.value = total;  // trivial upper bound
    return res;
  }
  const auto states = all_states(space);
  std::vector<Bits> balls(total, Bits(total));
  for (std::size_t a = 0; a < total; ++a)
    for (std::size_t b = 0; b < total; ++b)
      if (dist(states[a], states[b]) <= radius) balls[a].set(b);
  // greedy cover as incumbent
  std::vector<std::size_t> greedy;
  {
    Bits uncovered(total);
    for (std::size_t x = 0; x < total; ++x) uncovered.set(x);
    while (uncovered.any()) {
      std::size_t best_c = 0, best_gain = 0;
      for (std::size_t c = 0; c < total; ++c) {
        const std::size_t g = balls[c].and_count(uncovered);
        if (g > best_gain) {
          best_gain = g;
          best_c = c;
        }
      }
      greedy.push_back(best_c);
      uncovered.minus(balls[best_c]);
    }
  }
  CoverSearch search(std::move(balls), lower, budget.max_nodes);
  search.seed(greedy);
  // some optimal covering code contains state 0 (translate any codeword there)
  const bool finished = search.run(0);
  res.value = search.best().size();
  res.witness = search.best();
  std::sort(res.witness.begin(), res.witness.end());
  res.exact = finished || res.value == lower;
  return res;
}

std::size_t statistics_rank(const StateSpace& space, const std::vector<std::size_t>& states) {
  if (states.empty()) return 0;
  const SufficientStatistics stats(space);
  IntMatrix m(stats.rows(), states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    for (std::size_t r = 0; r < stats.rows(); ++r) m(r, k) = stats.at(r, states[k]);
  return exact_rank(m);
}

namespace {

class PackingSearch {
 public:
  PackingSearch(const StateSpace& space, std::vector<int> radii, std::uint64_t budget)
      : space_(space), radii_(std::move(radii)), states_(all_states(space)), budget_(budget) {}

  std::optional<BallPacking> run() {
    centers_.clear();
    place(0);
    if (full_) return full_;
    return fallback_;
  }

 private:
  void place(std::size_t k) {
    if (full_ || ++nodes_ > budget_) return;
    if (k == radii_.size()) {
      record();
      return;
    }
    const std::size_t start = k == 0 ? 0 : 0;
    const std::size_t end = k == 0 ? 1 : states_.size();  // translation symmetry
    for (std::size_t c = start; c < end; ++c) {
      bool ok = true;
      for (std::size_t l = 0; l < k && ok; ++l)
        ok = dist(states_[c], states_[centers_[l]]) >= radii_[k] + radii_[l] + 1;
      if (!ok) continue;
      centers_.push_back(c);
      place(k + 1);
      centers_.pop_back();
      if (full_ || nodes_ > budget_) return;
    }
  }

  void record() {
    std::vector<std::size_t> rest;
    for (std::size_t x = 0; x < states_.size(); ++x) {
      bool inside = false;
      for (std::size_t l = 0; l < centers_.size() && !inside; ++l)
        inside = dist(states_[x], states_[centers_[l]]) <= radii_[l];
      if (!inside) rest.push_back(x);
    }
    BallPacking bp;
    bp.centers = centers_;
    bp.complement_rank = statistics_rank(space_, rest);
    bp.complement_full_rank = bp.complement_rank == space_.stat_dim();
    if (bp.complement_full_rank) full_ = bp;
    else if (!fallback_) fallback_ = bp;
  }

  const StateSpace& space_;
  std::vector<int> radii_;
  std::vector<State> states_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> centers_;
  std::optional<BallPacking> full_;
  std::optional<BallPacking> fallback_;
};

}  // namespace

std::optional<BallPacking> ball_packing(const StateSpace& space, const std::vector<int>& radii,
                                        SearchBudget budget) {
  if (radii.empty()) {
    BallPacking bp;
    std::vector<std::size_t> all(space.size());
    for (std::size_t x = 0; x < all.size(); ++x) all[x] = x;
    bp.complement_rank = statistics_rank(space, all);
    bp.complement_full_rank = true;
    return bp;
  }
  std::size_t volume = 0;
  for (int r : radii) {
    if (r < 0) throw std::invalid_argument("radii must be nonnegative");
    volume += ball_volume(space, r);
  }
  if (volume > space.size()) return std::nullopt;
  if (space.size() > kMaxSearchStates) return std::nullopt;
  PackingSearch search(space, radii, std::min<std::uint64_t>(budget.max_nodes, 2'000'000));
  return search.run();
}

}  // namespace drbm
