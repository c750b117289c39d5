#include "ptw/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptw {

Label Label::dedge(i32 from, i32 to) {
  if (from == to || (from > to ? from - to : to - from) != 1)
    throw std::invalid_argument("dedge endpoints must be adjacent path vertices");
  return {from, to};
}

u64 pair_index(u64 i, u64 j, u64 n) {
  if (i < 1 || i > n || j < 1 || j > n)
    throw std::out_of_range("pair_index argument outside [1,n]");
  return (i - 1) * n + j;
}

std::pair<u64, u64> unpair_index(u64 code, u64 n) {
  if (code < 1 || code > n * n)
    throw std::out_of_range("unpair_index argument outside [1,n^2]");
  return {(code - 1) / n + 1, (code - 1) % n + 1};
}

std::size_t checked_tensor_size(u32 n, std::size_t order) {
  if (n == 0) throw std::invalid_argument("alphabet size must be positive");
  std::size_t sz = 1;
  for (std::size_t k = 0; k < order; ++k) {
    if (sz > (std::size_t{1} << 30) / n)
      throw std::invalid_argument("tensor index space exceeds 2^30");
    sz *= n;
  }
  return sz;
}

Tensor::Tensor(const FieldCtx& c, u32 alphabet, std::vector<Label> labs)
    : n(alphabet), labels(std::move(labs)), ctx(c) {
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b)
      if (labels[a] == labels[b])
        throw std::invalid_argument("duplicate tensor label");
  std::size_t sz = checked_tensor_size(n, labels.size());
  if (ctx.finite())
    fe.assign(sz, 0);
  else
    ce.assign(sz, cplx{0.0, 0.0});
}

std::size_t Tensor::size() const { return ctx.finite() ? fe.size() : ce.size(); }

bool Tensor::operator==(const Tensor& o) const {
  if (!(ctx == o.ctx) || n != o.n || labels != o.labels) return false;
  if (ctx.finite()) return fe == o.fe;
  double scale = 1.0;
  for (const cplx& z : ce) scale = std::max(scale, std::abs(z));
  for (const cplx& z : o.ce) scale = std::max(scale, std::abs(z));
  for (std::size_t k = 0; k < ce.size(); ++k)
    if (std::abs(ce[k] - o.ce[k]) > ctx.eps * scale) return false;
  return true;
}

static void check_same_shape(const Tensor& a, const Tensor& b) {
  if (!(a.ctx == b.ctx) || a.n != b.n || a.labels != b.labels)
    throw std::invalid_argument("tensor shape/label/field mismatch");
}

Tensor tensor_add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b);
  Tensor r = a;
  if (a.ctx.finite()) {
    for (std::size_t k = 0; k < r.fe.size(); ++k) r.fe[k] = fadd(a.ctx, a.fe[k], b.fe[k]);
  } else {
    for (std::size_t k = 0; k < r.ce.size(); ++k) r.ce[k] = a.ce[k] + b.ce[k];
  }
  return r;
}

Tensor tensor_sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b);
  Tensor r = a;
  if (a.ctx.finite()) {
    for (std::size_t k = 0; k < r.fe.size(); ++k) r.fe[k] = fsub(a.ctx, a.fe[k], b.fe[k]);
  } else {
    for (std::size_t k = 0; k < r.ce.size(); ++k) r.ce[k] = a.ce[k] - b.ce[k];
  }
  return r;
}

Tensor tensor_scale_int(const Tensor& a, i64 s) {
  Tensor r = a;
  if (a.ctx.finite()) {
    u64 sv = freduce(a.ctx, s);
    for (u64& x : r.fe) x = fmul(a.ctx, x, sv);
  } else {
    for (cplx& z : r.ce) z *= static_cast<double>(s);
  }
  return r;
}

bool tensor_is_zero(const Tensor& a) {
  if (a.ctx.finite()) {
    for (u64 x : a.fe)
      if (x != 0) return false;
    return true;
  }
  double scale = 1.0;
  for (const cplx& z : a.ce) scale = std::max(scale, std::abs(z));
  for (const cplx& z : a.ce)
    if (std::abs(z) > a.ctx.eps * scale) return false;
  return true;
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
  if (!(a.ctx == b.ctx) || a.n != b.n)
    throw std::invalid_argument("tensor_product field/alphabet mismatch");
  std::vector<Label> labs = a.labels;
  labs.insert(labs.end(), b.labels.begin(), b.labels.end());
  Tensor r(a.ctx, a.n, std::move(labs));
  std::size_t bs = b.size();
  if (a.ctx.finite()) {
    for (std::size_t i = 0; i < a.fe.size(); ++i)
      for (std::size_t j = 0; j < bs; ++j) r.fe[i * bs + j] = fmul(a.ctx, a.fe[i], b.fe[j]);
  } else {
    for (std::size_t i = 0; i < a.ce.size(); ++i)
      for (std::size_t j = 0; j < bs; ++j) r.ce[i * bs + j] = a.ce[i] * b.ce[j];
  }
  return r;
}

// Positions of `order` inside a.labels; throws unless it is a permutation.
static std::vector<std::size_t> label_positions(const Tensor& a,
                                                const std::vector<Label>& order) {
  std::vector<std::size_t> pos;
  std::vector<bool> used(a.labels.size(), false);
  for (const Label& l : order) {
    bool found = false;
    for (std::size_t k = 0; k < a.labels.size(); ++k)
      if (!used[k] && a.labels[k] == l) {
        pos.push_back(k);
        used[k] = true;
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("label not present in tensor");
  }
  return pos;
}

Tensor reorder_labels(const Tensor& a, const std::vector<Label>& order) {
  if (order.size() != a.labels.size())
    throw std::invalid_argument("reorder_labels needs a full permutation");
  std::vector<std::size_t> pos = label_positions(a, order);
  Tensor r(a.ctx, a.n, order);
  std::size_t ord = a.order();
  std::vector<u32> dig(ord, 0);
  std::size_t sz = a.size();
  for (std::size_t off = 0; off < sz; ++off) {
    // digits of off, msb-first in a's label order
    std::size_t rest = off;
    for (std::size_t k = ord; k-- > 0;) {
      dig[k] = static_cast<u32>(rest % a.n);
      rest /= a.n;
    }
    std::size_t noff = 0;
    for (std::size_t k = 0; k < ord; ++k) noff = noff * a.n + dig[pos[k]];
    if (a.ctx.finite())
      r.fe[noff] = a.fe[off];
    else
      r.ce[noff] = a.ce[off];
  }
  return r;
}

DenseMatrix flatten_mat(const Tensor& a, const std::vector<Label>& iset,
                        const std::vector<Label>& jset) {
  if (iset.size() + jset.size() != a.labels.size())
    throw std::invalid_argument("flatten_mat: I and J must partition the labels");
  // row/col digit significance follows the tensor's own label order
  auto sorted_by_tensor_order = [&](std::vector<Label> s) {
    std::vector<std::size_t> pos = label_positions(a, s);
    std::vector<std::pair<std::size_t, Label>> keyed;
    for (std::size_t k = 0; k < s.size(); ++k) keyed.emplace_back(pos[k], s[k]);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = keyed[k].second;
    return s;
  };
  std::vector<Label> order = sorted_by_tensor_order(iset);
  std::vector<Label> jsorted = sorted_by_tensor_order(jset);
  order.insert(order.end(), jsorted.begin(), jsorted.end());
  Tensor t = reorder_labels(a, order);  // also validates the partition
  std::size_t rows = 1, cols = 1;
  for (std::size_t k = 0; k < iset.size(); ++k) rows *= a.n;
  for (std::size_t k = 0; k < jset.size(); ++k) cols *= a.n;
  DenseMatrix m(a.ctx, rows, cols);
  m.fe = std::move(t.fe);
  m.ce = std::move(t.ce);
  return m;
}

HyperMatrix::HyperMatrix(u32 n_, u32 d_, DenseMatrix mat) : n(n_), d(d_), m(std::move(mat)) {
  std::size_t side = 1;
  for (u32 k = 0; k < d; ++k) side *= n;
  if (m.rows != side || m.cols != side)
    throw std::invalid_argument("HyperMatrix: matrix is not n^d x n^d");
}

HyperMatrix HyperMatrix::identity(const FieldCtx& c, u32 n, u32 d) {
  std::size_t side = checked_tensor_size(n, d);
  return HyperMatrix(n, d, DenseMatrix::identity(c, side));
}

// Padded(M) lives on the path v_0 .. v_{d+1}.  Column digit j_{t-1} rides the
// left-to-right dedge of edge t (j_0 is the left pad), row digit i_t rides the
// right-to-left dedge (i_{d+1} is the right pad); pads must equal 1.
Tensor padded_tensor(const HyperMatrix& hm) {
  u32 d = hm.d, n = hm.n;
  std::vector<Label> labs;
  for (u32 t = 1; t <= d + 1; ++t) {
    labs.push_back(Label::dedge(static_cast<i32>(t) - 1, static_cast<i32>(t)));
    labs.push_back(Label::dedge(static_cast<i32>(t), static_cast<i32>(t) - 1));
  }
  Tensor r(hm.m.ctx, n, labs);
  std::size_t side = hm.side();
  for (std::size_t ri = 0; ri < side; ++ri) {
    for (std::size_t cj = 0; cj < side; ++cj) {
      // digits msb-first: i_1..i_d from ri, j_1..j_d from cj (0-based)
      std::vector<u32> idig(d), jdig(d);
      std::size_t rest = ri;
      for (u32 k = d; k-- > 0;) {
        idig[k] = static_cast<u32>(rest % n);
        rest /= n;
      }
      rest = cj;
      for (u32 k = d; k-- > 0;) {
        jdig[k] = static_cast<u32>(rest % n);
        rest /= n;
      }
      // label order is f_1 b_1 f_2 b_2 ...; digit on f_t is j_{t-1}, on b_t is i_t
      std::size_t off = 0;
      for (u32 t = 1; t <= d + 1; ++t) {
        u32 fval = (t == 1) ? 0 : jdig[t - 2];
        u32 bval = (t == d + 1) ? 0 : idig[t - 1];
        off = (off * n + fval) * n + bval;
      }
      if (hm.m.ctx.finite())
        r.fe[off] = hm.m.f(ri, cj);
      else
        r.ce[off] = hm.m.c(ri, cj);
    }
  }
  return r;
}

// Same entries with each edge's two digits fused into one [n^2] symbol
// <left-to-right digit, right-to-left digit>; plain labels 1..d+1.
Tensor shifted_tensor(const HyperMatrix& hm) {
  u32 d = hm.d, n = hm.n;
  std::vector<Label> labs;
  for (u32 t = 1; t <= d + 1; ++t) labs.push_back(Label::plain(static_cast<i32>(t)));
  Tensor r(hm.m.ctx, n * n, labs);
  std::size_t side = hm.side();
  for (std::size_t ri = 0; ri < side; ++ri) {
    for (std::size_t cj = 0; cj < side; ++cj) {
      std::vector<u32> idig(d), jdig(d);
      std::size_t rest = ri;
      for (u32 k = d; k-- > 0;) {
        idig[k] = static_cast<u32>(rest % n);
        rest /= n;
      }
      rest = cj;
      for (u32 k = d; k-- > 0;) {
        jdig[k] = static_cast<u32>(rest % n);
        rest /= n;
      }
      std::size_t off = 0;
      for (u32 t = 1; t <= d + 1; ++t) {
        u32 fval = (t == 1) ? 0 : jdig[t - 2];
        u32 bval = (t == d + 1) ? 0 : idig[t - 1];
        off = off * (n * n) + (fval * n + bval);
      }
      if (hm.m.ctx.finite())
        r.fe[off] = hm.m.f(ri, cj);
      else
        r.ce[off] = hm.m.c(ri, cj);
    }
  }
  return r;
}

// Edges present in a dedge label set, as sorted edge ids (edge t = {v_{t-1},v_t}).
static std::vector<i32> edge_ids_of(const std::vector<Label>& labs) {
  std::vector<i32> ids;
  for (const Label& l : labs) {
    if (!l.is_dedge()) throw std::invalid_argument("flat expects directed-edge labels");
    ids.push_back(std::max(l.u, l.v));
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t k = 0; k + 1 < ids.size(); k += 2)
    if (ids[k] != ids[k + 1])
      throw std::invalid_argument("flat expects both directions of every edge");
  if (ids.size() % 2 != 0) throw std::invalid_argument("flat expects paired dedges");
  std::vector<i32> uniq;
  for (std::size_t k = 0; k < ids.size(); k += 2) uniq.push_back(ids[k]);
  return uniq;
}

Tensor flat(const Tensor& a) {
  std::vector<i32> edges = edge_ids_of(a.labels);
  // reorder into f_1 b_1 f_2 b_2 ... so fusing adjacent digit pairs is the
  // identity on the entry array
  std::vector<Label> order;
  std::vector<Label> plain_labels;
  for (i32 e : edges) {
    order.push_back(Label::dedge(e - 1, e));
    order.push_back(Label::dedge(e, e - 1));
    plain_labels.push_back(Label::plain(e));
  }
  Tensor t = reorder_labels(a, order);
  Tensor r(a.ctx, a.n * a.n, plain_labels);
  r.fe = std::move(t.fe);
  r.ce = std::move(t.ce);
  return r;
}

Tensor unflat(const Tensor& a) {
  u32 root = 0;
  while (static_cast<u64>(root + 1) * (root + 1) <= a.n) ++root;
  if (root * root != a.n)
    throw std::invalid_argument("unflat: alphabet size is not a square");
  std::vector<Label> labs;
  for (const Label& l : a.labels) {
    if (l.is_dedge()) throw std::invalid_argument("unflat expects plain edge labels");
    labs.push_back(Label::dedge(l.u - 1, l.u));
    labs.push_back(Label::dedge(l.u, l.u - 1));
  }
  Tensor r(a.ctx, root, labs);
  r.fe = a.fe;
  r.ce = a.ce;
  return r;
}

Tensor imm_tensor(u32 n, u32 d, const FieldCtx& c) {
  std::vector<Label> labs;
  for (u32 t = 1; t <= d; ++t) labs.push_back(Label::plain(static_cast<i32>(t)));
  Tensor r(c, n * n, labs);
  std::size_t sz = r.size();
  for (std::size_t off = 0; off < sz; ++off) {
    std::size_t rest = off;
    std::vector<u32> sym(d);
    for (u32 k = d; k-- > 0;) {
      sym[k] = static_cast<u32>(rest % (n * n));
      rest /= (n * n);
    }
    bool chain = true;
    for (u32 t = 0; t + 1 < d; ++t) {
      u32 b_t = sym[t] % n;      // column digit of factor t
      u32 a_next = sym[t + 1] / n;  // row digit of factor t+1
      if (b_t != a_next) {
        chain = false;
        break;
      }
    }
    if (!chain) continue;
    if (c.finite())
      r.fe[off] = 1;
    else
      r.ce[off] = cplx{1.0, 0.0};
  }
  return r;
}

}  // namespace ptw
