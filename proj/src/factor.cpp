#include "fbne/factor.hpp"

#include <algorithm>

namespace fbne {

namespace {

// Strides for row-major layout, last variable fastest.
std::vector<std::size_t> make_strides(const std::vector<int>& cards) {
  std::vector<std::size_t> strides(cards.size());
  std::size_t acc = 1;
  for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
    strides[i] = acc;
    acc *= cards[i];
  }
  return strides;
}

}  // namespace

Factor Factor::from_cpt(const BayesianNetwork& net, int node) {
  const Cpt& cpt = net.cpt(node);
  Factor f;
  f.vars = cpt.parents;
  f.vars.push_back(node);
  std::sort(f.vars.begin(), f.vars.end());
  f.cards.reserve(f.vars.size());
  std::size_t size = 1;
  for (int v : f.vars) {
    f.cards.push_back(net.variable(v).cardinality());
    size *= f.cards.back();
  }
  f.values.assign(size, 0.0);

  // Walk every assignment of the factor's scope and read the CPT.
  const auto scope_pos = [&f](int v) {
    return static_cast<int>(
        std::lower_bound(f.vars.begin(), f.vars.end(), v) - f.vars.begin());
  };
  std::vector<int> parent_pos;
  parent_pos.reserve(cpt.parents.size());
  for (int p : cpt.parents) parent_pos.push_back(scope_pos(p));
  const int child_pos = scope_pos(node);

  std::vector<int> assign(f.vars.size(), 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    int row = 0;
    for (int pp : parent_pos) row = row * f.cards[pp] + assign[pp];
    f.values[idx] = cpt.rows[row][assign[child_pos]];

    for (int d = static_cast<int>(assign.size()) - 1; d >= 0; --d) {
      if (++assign[d] < f.cards[d]) break;
      assign[d] = 0;
    }
  }
  return f;
}

Factor Factor::restricted(int var, int state) const {
  const auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end()) return *this;
  const std::size_t pos = static_cast<std::size_t>(it - vars.begin());

  Factor out;
  out.vars = vars;
  out.vars.erase(out.vars.begin() + pos);
  out.cards = cards;
  out.cards.erase(out.cards.begin() + pos);

  const std::vector<std::size_t> strides = make_strides(cards);
  const std::size_t out_size = values.size() / cards[pos];
  out.values.reserve(out_size);
  std::vector<int> assign(out.vars.size(), 0);
  for (std::size_t o = 0; o < out_size; ++o) {
    std::size_t idx = state * strides[pos];
    std::size_t k = 0;
    for (std::size_t d = 0; d < vars.size(); ++d) {
      if (d == pos) continue;
      idx += assign[k] * strides[d];
      ++k;
    }
    out.values.push_back(values[idx]);
    for (int d = static_cast<int>(assign.size()) - 1; d >= 0; --d) {
      if (++assign[d] < out.cards[d]) break;
      assign[d] = 0;
    }
  }
  return out;
}

Factor Factor::multiplied_by(const Factor& other) const {
  Factor out;
  out.vars.reserve(vars.size() + other.vars.size());
  std::set_union(vars.begin(), vars.end(), other.vars.begin(),
                 other.vars.end(), std::back_inserter(out.vars));

  // Map each operand position into the union scope.
  std::vector<int> pos_a(out.vars.size(), -1), pos_b(out.vars.size(), -1);
  out.cards.resize(out.vars.size());
  for (std::size_t d = 0; d < out.vars.size(); ++d) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == out.vars[d]) {
        pos_a[d] = static_cast<int>(i);
        out.cards[d] = cards[i];
      }
    }
    for (std::size_t i = 0; i < other.vars.size(); ++i) {
      if (other.vars[i] == out.vars[d]) {
        pos_b[d] = static_cast<int>(i);
        out.cards[d] = other.cards[i];
      }
    }
  }

  const std::vector<std::size_t> stride_a = make_strides(cards);
  const std::vector<std::size_t> stride_b = make_strides(other.cards);
  std::size_t size = 1;
  for (int c : out.cards) size *= c;
  out.values.assign(size, 0.0);

  std::vector<int> assign(out.vars.size(), 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t ia = 0, ib = 0;
    for (std::size_t d = 0; d < out.vars.size(); ++d) {
      if (pos_a[d] >= 0) ia += assign[d] * stride_a[pos_a[d]];
      if (pos_b[d] >= 0) ib += assign[d] * stride_b[pos_b[d]];
    }
    out.values[idx] = values[ia] * other.values[ib];
    for (int d = static_cast<int>(assign.size()) - 1; d >= 0; --d) {
      if (++assign[d] < out.cards[d]) break;
      assign[d] = 0;
    }
  }
  return out;
}

Factor Factor::summed_out(int var) const {
  const auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end()) return *this;
  const std::size_t pos = static_cast<std::size_t>(it - vars.begin());

  Factor out;
  out.vars = vars;
  out.vars.erase(out.vars.begin() + pos);
  out.cards = cards;
  out.cards.erase(out.cards.begin() + pos);
  std::size_t out_size = values.size() / cards[pos];
  out.values.assign(out_size, 0.0);

  const std::vector<std::size_t> strides = make_strides(cards);
  std::vector<int> assign(out.vars.size(), 0);
  for (std::size_t o = 0; o < out_size; ++o) {
    std::size_t base = 0;
    std::size_t k = 0;
    for (std::size_t d = 0; d < vars.size(); ++d) {
      if (d == pos) continue;
      base += assign[k] * strides[d];
      ++k;
    }
    double sum = 0.0;
    for (int s = 0; s < cards[pos]; ++s) sum += values[base + s * strides[pos]];
    out.values[o] = sum;
    for (int d = static_cast<int>(assign.size()) - 1; d >= 0; --d) {
      if (++assign[d] < out.cards[d]) break;
      assign[d] = 0;
    }
  }
  return out;
}

double Factor::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace fbne
