#include "ptw/abp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptw/sos.hpp"

namespace ptw {

namespace {

Tensor scaled_by_cell(const Tensor& t, const DenseMatrix& v, std::size_t idx) {
  Tensor r = t;
  if (t.ctx.finite()) {
    u64 s = v.fe[idx];
    for (u64& x : r.fe) x = fmul(t.ctx, x, s);
  } else {
    cplx s = v.ce[idx];
    for (cplx& z : r.ce) z *= s;
  }
  return r;
}

std::vector<Label> plain_range(i32 first, i32 last) {
  std::vector<Label> labs;
  for (i32 k = first; k <= last; ++k) labs.push_back(Label::plain(k));
  return labs;
}

// the linear form at position (i, j) of layer t (0-based) as an order-1
// tensor with the given plain label
Tensor entry_form(const OrderedABP& abp, u32 t, std::size_t i, std::size_t j,
                  i32 label) {
  Tensor e(abp.ctx, abp.n, {Label::plain(label)});
  const DenseMatrix& layer = abp.layers[t];
  std::size_t row = i * abp.widths[t + 1] + j;
  for (u32 a = 0; a < abp.n; ++a) {
    if (abp.ctx.finite())
      e.fe[a] = layer.f(row, a);
    else
      e.ce[a] = layer.c(row, a);
  }
  return e;
}

// forward states v1^T M_1 ... M_t, one coefficient tensor per boundary index
std::vector<Tensor> forward_states(const OrderedABP& abp, u32 upto) {
  std::vector<Tensor> state;
  state.reserve(abp.widths[0]);
  for (std::size_t i = 0; i < abp.widths[0]; ++i) {
    Tensor s(abp.ctx, abp.n, {});
    if (abp.ctx.finite())
      s.fe[0] = abp.v1.f(0, i);
    else
      s.ce[0] = abp.v1.c(0, i);
    state.push_back(std::move(s));
  }
  for (u32 t = 0; t < upto; ++t) {
    std::vector<Tensor> next(abp.widths[t + 1],
                             Tensor(abp.ctx, abp.n, plain_range(1, static_cast<i32>(t + 1))));
    for (std::size_t i = 0; i < abp.widths[t]; ++i)
      for (std::size_t j = 0; j < abp.widths[t + 1]; ++j)
        next[j] = tensor_add(next[j],
                             tensor_product(state[i], entry_form(abp, t, i, j,
                                                                 static_cast<i32>(t + 1))));
    state = std::move(next);
  }
  return state;
}

// backward states M_{from+1} ... M_d v2 with labels from+1..d
std::vector<Tensor> backward_states(const OrderedABP& abp, u32 from) {
  std::vector<Tensor> state;
  state.reserve(abp.widths[abp.d]);
  for (std::size_t j = 0; j < abp.widths[abp.d]; ++j) {
    Tensor s(abp.ctx, abp.n, {});
    if (abp.ctx.finite())
      s.fe[0] = abp.v2.f(0, j);
    else
      s.ce[0] = abp.v2.c(0, j);
    state.push_back(std::move(s));
  }
  for (u32 t = abp.d; t > from; --t) {
    std::vector<Tensor> next(
        abp.widths[t - 1],
        Tensor(abp.ctx, abp.n, plain_range(static_cast<i32>(t), static_cast<i32>(abp.d))));
    for (std::size_t i = 0; i < abp.widths[t - 1]; ++i)
      for (std::size_t j = 0; j < abp.widths[t]; ++j)
        next[i] = tensor_add(
            next[i], tensor_product(entry_form(abp, t - 1, i, j, static_cast<i32>(t)),
                                    state[j]));
    state = std::move(next);
  }
  return state;
}

// regroup an order-L tensor into a matrix sending positions with to_row set
// to the row index (most significant first on both sides)
DenseMatrix split_positions(const Tensor& t, const std::vector<bool>& to_row) {
  std::size_t nrow = 1, ncol = 1;
  for (bool b : to_row) (b ? nrow : ncol) *= t.n;
  DenseMatrix out(t.ctx, nrow, ncol);
  std::size_t order = t.labels.size();
  std::vector<u32> digits(order);
  std::size_t sz = t.size();
  for (std::size_t off = 0; off < sz; ++off) {
    std::size_t rest = off;
    for (std::size_t k = order; k-- > 0;) {
      digits[k] = static_cast<u32>(rest % t.n);
      rest /= t.n;
    }
    std::size_t r = 0, c = 0;
    for (std::size_t k = 0; k < order; ++k)
      (to_row[k] ? r : c) = (to_row[k] ? r : c) * t.n + digits[k];
    if (t.ctx.finite())
      out.fe[r * ncol + c] = t.fe[off];
    else
      out.ce[r * ncol + c] = t.ce[off];
  }
  return out;
}

bool matrix_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  if (a.ctx.finite()) return a.fe == b.fe;
  return approx_equal(a, b);
}

}  // namespace

std::size_t OrderedABP::size() const {
  std::size_t s = 0;
  for (u32 w : widths) s += w;
  return s;
}

u32 OrderedABP::width() const {
  u32 w = 0;
  for (u32 x : widths) w = std::max(w, x);
  return w;
}

void OrderedABP::validate() const {
  bool ok = n >= 1 && d >= 1 && widths.size() == static_cast<std::size_t>(d) + 1 &&
            layers.size() == static_cast<std::size_t>(d);
  if (ok)
    for (u32 w : widths) ok = ok && w >= 1;
  if (ok)
    for (u32 t = 0; t < d; ++t)
      ok = ok && layers[t].rows == static_cast<std::size_t>(widths[t]) * widths[t + 1] &&
           layers[t].cols == n && layers[t].ctx == ctx;
  ok = ok && v1.rows == 1 && v1.cols == widths[0] && v1.ctx == ctx && v2.rows == 1 &&
       v2.cols == widths[d] && v2.ctx == ctx;
  if (!ok) throw std::invalid_argument("branching program shape chain is inconsistent");
}

Tensor abp_eval(const OrderedABP& abp) {
  abp.validate();
  std::vector<Tensor> state = forward_states(abp, abp.d);
  Tensor out(abp.ctx, abp.n, plain_range(1, static_cast<i32>(abp.d)));
  for (std::size_t j = 0; j < state.size(); ++j)
    out = tensor_add(out, scaled_by_cell(state[j], abp.v2, j));
  return out;
}

static OrderedABP imm_shape(u32 n, u32 d, const FieldCtx& ctx) {
  if (n == 0 || d == 0) throw std::invalid_argument("program shape needs n, d >= 1");
  OrderedABP abp;
  abp.n = n * n;
  abp.d = d;
  abp.ctx = ctx;
  abp.widths.assign(d + 1, n);
  for (u32 t = 0; t < d; ++t) {
    DenseMatrix layer(ctx, static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n) * n);
    for (u32 i = 0; i < n; ++i)
      for (u32 j = 0; j < n; ++j) layer.set_int(static_cast<std::size_t>(i) * n + j,
                                                static_cast<std::size_t>(i) * n + j, 1);
    abp.layers.push_back(std::move(layer));
  }
  abp.v1 = DenseMatrix(ctx, 1, n);
  abp.v2 = DenseMatrix(ctx, 1, n);
  return abp;
}

OrderedABP abp_for_imm(u32 n, u32 d, const FieldCtx& ctx) {
  OrderedABP abp = imm_shape(n, d, ctx);
  for (u32 k = 0; k < n; ++k) {
    abp.v1.set_int(0, k, 1);
    abp.v2.set_int(0, k, 1);
  }
  return abp;
}

OrderedABP abp_for_shifted_identity(u32 n, u32 d, const FieldCtx& ctx) {
  OrderedABP abp = imm_shape(n, d, ctx);
  abp.v1.set_int(0, 0, 1);
  abp.v2.set_int(0, 0, 1);
  return abp;
}

MiddleCut abp_middle_cut(const OrderedABP& abp, const HyperMatrix& m) {
  abp.validate();
  if (abp.n != static_cast<u64>(m.n) * m.n || abp.d != m.d + 1)
    throw std::invalid_argument("branching program shape does not match the target matrix");
  Tensor eval = abp_eval(abp);
  if (!(eval == shifted_tensor(m)))
    throw std::invalid_argument(
        "branching program does not evaluate to the shifted tensor of the target");

  const u32 dd = abp.d;
  const u32 c = (dd + 1) / 2;
  const u32 nn = m.n;

  // the product really does factor through the middle layer's boundary
  std::vector<Tensor> pre = forward_states(abp, c - 1);
  std::vector<Tensor> suf = backward_states(abp, c);
  Tensor reassembled(abp.ctx, abp.n, plain_range(1, static_cast<i32>(dd)));
  for (std::size_t i = 0; i < abp.widths[c - 1]; ++i)
    for (std::size_t j = 0; j < abp.widths[c]; ++j)
      reassembled = tensor_add(
          reassembled,
          tensor_product(tensor_product(pre[i], entry_form(abp, c - 1, i, j,
                                                           static_cast<i32>(c))),
                         suf[j]));
  if (!(reassembled == eval))
    throw std::logic_error("middle-cut reassembly does not reproduce the evaluation");

  // pinned flattening: coordinates 2..dd against dd+1..2dd-1 of the
  // order-2dd unflattened tensor, both padded ends fixed to the first symbol
  Tensor a = unflat(eval);
  std::size_t side = 1;
  for (u32 k = 0; k + 1 < dd; ++k) side *= nn;
  DenseMatrix pinned(abp.ctx, side, side);
  std::vector<u32> digits(2 * dd, 0);
  for (std::size_t row = 0; row < side; ++row) {
    std::size_t rest = row;
    for (u32 k = dd; k >= 2; --k) {
      digits[k - 1] = static_cast<u32>(rest % nn);
      rest /= nn;
    }
    for (std::size_t col = 0; col < side; ++col) {
      rest = col;
      for (u32 k = 2 * dd - 1; k >= dd + 1; --k) {
        digits[k - 1] = static_cast<u32>(rest % nn);
        rest /= nn;
      }
      digits[0] = 0;
      digits[2 * dd - 1] = 0;
      std::size_t off = 0;
      for (u32 k = 0; k < 2 * dd; ++k) off = off * nn + digits[k];
      if (abp.ctx.finite())
        pinned.fe[row * side + col] = a.fe[off];
      else
        pinned.ce[row * side + col] = a.ce[off];
    }
  }

  auto [u, v] = rank_factor(pinned);
  MiddleCut cut;
  cut.cut = c;
  cut.rank = u.cols;
  cut.apriori = static_cast<u64>(abp.width()) * abp.width() * abp.n;

  std::vector<Label> half = plain_range(1, static_cast<i32>(dd) - 1);
  for (std::size_t l = 0; l < cut.rank; ++l) {
    Tensor b(abp.ctx, nn, half), cc(abp.ctx, nn, half);
    for (std::size_t i = 0; i < side; ++i) {
      if (abp.ctx.finite()) {
        b.fe[i] = u.f(i, l);
        cc.fe[i] = v.f(l, i);
      } else {
        b.ce[i] = u.c(i, l);
        cc.ce[i] = v.c(l, i);
      }
    }
    cut.b.push_back(std::move(b));
    cut.c.push_back(std::move(cc));
  }

  if (dd % 2 == 1 && dd > 1) {
    // coordinate k of each factor sits at position k+1 (left factor) or
    // dd+k (right factor) of the unflattened tensor; both are even exactly
    // when k is odd, sending that digit to the coarse row side
    std::vector<bool> to_row(dd - 1);
    for (u32 k = 1; k < dd; ++k) to_row[k - 1] = (k % 2 == 1);
    DenseMatrix acc(abp.ctx, m.side(), m.side());
    for (std::size_t l = 0; l < cut.rank; ++l) {
      cut.bhat.push_back(split_positions(cut.b[l], to_row));
      cut.chat.push_back(split_positions(cut.c[l], to_row));
      acc = add(acc, kron(cut.bhat[l], cut.chat[l]));
    }
    if (!matrix_equal(acc, m.m))
      throw std::logic_error("Kronecker reassembly does not reproduce the target");
  }

  cut.notes = "cut at layer " + std::to_string(c) + " of " + std::to_string(dd) +
              "; pinned flattening rank " + std::to_string(cut.rank) +
              " (a priori bound " + std::to_string(cut.apriori) + ")";
  return cut;
}

PtCertificate builtin_coarse_identity(const FieldCtx& ctx, u32 side) {
  HyperMatrix ident = HyperMatrix::identity(ctx, side, 2);
  bool char2 = ctx.finite() && ctx.characteristic() == 2;
  if (!char2 && (side == 1 || side == 2 || side == 4 || side == 8))
    return sos_to_pt(ident, base_identity(ctx, side));
  if (ctx.finite() && ctx.mod() == 2 && side == 2) return pt_rank_exact(ident).second;
  throw std::invalid_argument("no built-in coarse identity certificate for side " +
                              std::to_string(side) + " over " + ctx.describe() +
                              "; pass a provider");
}

PtCertificate abp_to_pt_cert(const OrderedABP& abp, const HyperMatrix& m,
                             const CoarseIdentityProvider& provider) {
  if (abp.d % 2 == 0)
    throw std::invalid_argument(
        "the certificate pipeline needs an odd number of variable blocks");
  MiddleCut cut = abp_middle_cut(abp, m);
  if (abp.d == 1) {
    PtCertificate triv = make_pt_certificate(
        m, {{0u, m.m}}, "degree-1 program: the target itself is the only part");
    verify_pt_certificate(triv);
    return triv;
  }

  const u32 h = m.d / 2;
  u64 coarse_side = checked_pow(m.n, h);
  const u32 nside = static_cast<u32>(coarse_side);
  PtCertificate coarse_id =
      provider ? provider(abp.ctx, nside) : builtin_coarse_identity(abp.ctx, nside);
  HyperMatrix ident = HyperMatrix::identity(abp.ctx, nside, 2);
  if (coarse_id.target.n != nside || coarse_id.target.d != 2 ||
      !matrix_equal(coarse_id.target.m, ident.m))
    throw std::invalid_argument("provider certificate does not certify the coarse identity");
  std::size_t vp = verify_pt_certificate(coarse_id);

  HyperMatrix coarse_m = regroup_view(m, h, 2);
  std::vector<std::pair<u32, DenseMatrix>> parts;
  for (std::size_t l = 0; l < cut.rank; ++l) {
    auto [image, moved] = kron_act(ident, {cut.bhat[l], cut.chat[l]}, coarse_id);
    if (!matrix_equal(image.m, kron(cut.bhat[l], cut.chat[l])))
      throw std::logic_error("Kronecker action image mismatch");
    for (const auto& [kappa, mat] : moved->parts) parts.emplace_back(kappa, mat);
  }
  PtCertificate coarse_cert = make_pt_certificate(coarse_m, parts, "");
  if (coarse_cert.value > cut.rank * vp)
    throw std::logic_error("certificate value exceeded the pair-count bound");

  PtCertificate fine = regroup_cert(coarse_cert, h, m.n);
  fine.metadata = cut.notes + "; coarse identity side " + std::to_string(nside) +
                  " certified with value " + std::to_string(vp) +
                  "; one Kronecker action per pair and part-wise summation give value " +
                  std::to_string(coarse_cert.value) + " <= " + std::to_string(cut.rank) +
                  " * " + std::to_string(vp) +
                  "; regrouped back to the fine axes with the value unchanged";
  if (verify_pt_certificate(fine) != fine.value)
    throw std::logic_error("regrouped certificate failed re-verification");
  return fine;
}

SmFormula SmFormula::leaf(i32 block, u32 var, u64 scalar) {
  SmFormula f;
  f.kind = Kind::leaf;
  f.block = block;
  f.var = var;
  f.fscalar = scalar;
  f.cscalar = cplx{static_cast<double>(scalar), 0.0};
  return f;
}

SmFormula SmFormula::cleaf(i32 block, u32 var, cplx scalar) {
  SmFormula f = leaf(block, var, 0);
  f.cscalar = scalar;
  return f;
}

SmFormula SmFormula::plus(std::vector<SmFormula> kids) {
  SmFormula f;
  f.kind = Kind::plus;
  f.kids = std::move(kids);
  return f;
}

SmFormula SmFormula::times(SmFormula left, SmFormula right) {
  SmFormula f;
  f.kind = Kind::times;
  f.kids.push_back(std::move(left));
  f.kids.push_back(std::move(right));
  return f;
}

u64 formula_leaves(const SmFormula& f) {
  if (f.kind == SmFormula::Kind::leaf) return 1;
  u64 s = 0;
  for (const SmFormula& k : f.kids) s += formula_leaves(k);
  return s;
}

std::vector<i32> formula_blocks(const SmFormula& f) {
  switch (f.kind) {
    case SmFormula::Kind::leaf:
      return {f.block};
    case SmFormula::Kind::plus: {
      if (f.kids.empty()) throw std::invalid_argument("sum nodes need at least one child");
      std::vector<i32> first = formula_blocks(f.kids[0]);
      for (std::size_t k = 1; k < f.kids.size(); ++k)
        if (formula_blocks(f.kids[k]) != first)
          throw std::invalid_argument("sum children must span the same block set");
      return first;
    }
    case SmFormula::Kind::times: {
      if (f.kids.size() != 2)
        throw std::invalid_argument("product nodes take exactly two children");
      std::vector<i32> left = formula_blocks(f.kids[0]);
      std::vector<i32> right = formula_blocks(f.kids[1]);
      std::vector<i32> merged;
      std::merge(left.begin(), left.end(), right.begin(), right.end(),
                 std::back_inserter(merged));
      if (std::adjacent_find(merged.begin(), merged.end()) != merged.end())
        throw std::invalid_argument("product children must use disjoint block sets");
      return merged;
    }
  }
  throw std::logic_error("unreachable formula kind");
}

static Tensor eval_node(const SmFormula& f, const FieldCtx& ctx, u32 alphabet) {
  switch (f.kind) {
    case SmFormula::Kind::leaf: {
      if (f.var >= alphabet)
        throw std::invalid_argument("leaf variable index outside the block alphabet");
      Tensor t(ctx, alphabet, {Label::plain(f.block)});
      if (ctx.finite())
        t.fe[f.var] = f.fscalar % ctx.mod();
      else
        t.ce[f.var] = f.cscalar;
      return t;
    }
    case SmFormula::Kind::plus: {
      Tensor acc = eval_node(f.kids[0], ctx, alphabet);
      for (std::size_t k = 1; k < f.kids.size(); ++k)
        acc = tensor_add(acc, eval_node(f.kids[k], ctx, alphabet));
      return acc;
    }
    case SmFormula::Kind::times: {
      Tensor prod = tensor_product(eval_node(f.kids[0], ctx, alphabet),
                                   eval_node(f.kids[1], ctx, alphabet));
      std::vector<Label> order = prod.labels;
      std::sort(order.begin(), order.end());
      return reorder_labels(prod, order);
    }
  }
  throw std::logic_error("unreachable formula kind");
}

Tensor formula_eval(const SmFormula& f, const FieldCtx& ctx, u32 alphabet) {
  formula_blocks(f);  // set-multilinearity check with precise errors
  return eval_node(f, ctx, alphabet);
}

static SmFormula random_node(Rng& rng, const std::vector<i32>& blocks, std::size_t lo,
                             std::size_t hi, u32 alphabet, const FieldCtx& ctx,
                             u32 depth, u32 max_fanin) {
  auto random_leaf = [&](std::size_t at) {
    u32 var = static_cast<u32>(rng.below(alphabet));
    if (ctx.finite()) return SmFormula::leaf(blocks[at], var, rng.below(ctx.mod()));
    return SmFormula::cleaf(blocks[at], var,
                            cplx{static_cast<double>(rng.below(5)) - 2.0,
                                 static_cast<double>(rng.below(5)) - 2.0});
  };
  if (lo == hi) {
    if (depth > 0 && rng.below(3) == 0) {
      std::vector<SmFormula> kids;
      u64 fan = 1 + rng.below(max_fanin);
      for (u64 k = 0; k < fan; ++k) kids.push_back(random_leaf(lo));
      return SmFormula::plus(std::move(kids));
    }
    return random_leaf(lo);
  }
  if (depth > 0 && rng.below(3) == 0) {
    std::vector<SmFormula> kids;
    u64 fan = 1 + rng.below(max_fanin);
    for (u64 k = 0; k < fan; ++k)
      kids.push_back(random_node(rng, blocks, lo, hi, alphabet, ctx, depth - 1, max_fanin));
    return SmFormula::plus(std::move(kids));
  }
  std::size_t mid = lo + 1 + (depth > 0 ? rng.below(hi - lo) : (hi - lo) / 2);
  u32 next = depth > 0 ? depth - 1 : 0;
  return SmFormula::times(
      random_node(rng, blocks, lo, mid - 1, alphabet, ctx, next, max_fanin),
      random_node(rng, blocks, mid, hi, alphabet, ctx, next, max_fanin));
}

SmFormula random_formula(Rng& rng, const std::vector<i32>& blocks, u32 alphabet,
                         const FieldCtx& ctx, u32 max_depth, u32 max_fanin) {
  if (blocks.empty()) throw std::invalid_argument("random_formula: empty block list");
  if (!std::is_sorted(blocks.begin(), blocks.end()))
    throw std::invalid_argument("random_formula: blocks must be sorted");
  return random_node(rng, blocks, 0, blocks.size() - 1, alphabet, ctx, max_depth,
                     std::max(1u, max_fanin));
}

MainTheoremReport main_theorem_check(const SmFormula& f, const FieldCtx& ctx,
                                     u32 alphabet, const PathGraph& g, u64 budget) {
  if (formula_blocks(f) != g.edges)
    throw std::invalid_argument("formula blocks do not match the graph's edge set");
  u32 root = 0;
  while (static_cast<u64>(root + 1) * (root + 1) <= alphabet) ++root;
  if (root * root != alphabet)
    throw std::invalid_argument("alphabet must be a perfect square");

  Tensor flattened = formula_eval(f, ctx, alphabet);
  Tensor a = unflat(flattened);
  GraphInfo info = graph_analyze(g);
  const double inf = std::numeric_limits<double>::infinity();

  MainTheoremReport rep;
  rep.leaves = formula_leaves(f);
  rep.longest = info.ell;
  rep.rho = rho_exact(a, g, budget);
  double logn = std::log2(static_cast<double>(root));
  double leaves_log2 = std::log2(static_cast<double>(rep.leaves));
  if (rep.rho.num == 0) {
    rep.bound_log2 = -inf;
    rep.margin_log2 = inf;
    rep.strong_margin_log2 = inf;
    rep.ok = true;
  } else {
    rep.bound_log2 = logn * std::log2(static_cast<double>(info.ell)) +
                     std::log2(static_cast<double>(rep.rho.num)) - logn * rep.rho.e;
    rep.margin_log2 = leaves_log2 - rep.bound_log2;
    rep.strong_margin_log2 = rep.margin_log2 - logn;
    rep.ok = rep.margin_log2 >= -1e-9;
  }
  rep.notes = "leaves " + std::to_string(rep.leaves) + " vs n^log2(ell) * rho = 2^" +
              (rep.rho.num ? std::to_string(rep.bound_log2) : std::string("-inf"));

  if (ctx.finite() && info.components.size() == 1 && g.edges.size() >= 2) {
    const u32 dd = static_cast<u32>(g.edges.size());
    const u32 bd = dd - 1;
    std::size_t side = 1;
    for (u32 k = 0; k < bd; ++k) side *= root;
    DenseMatrix mm(ctx, side, side);
    std::vector<u32> idig(bd), jdig(bd);
    for (std::size_t r = 0; r < side; ++r) {
      std::size_t rest = r;
      for (u32 k = bd; k-- > 0;) {
        idig[k] = static_cast<u32>(rest % root);
        rest /= root;
      }
      for (std::size_t cmain = 0; cmain < side; ++cmain) {
        rest = cmain;
        for (u32 k = bd; k-- > 0;) {
          jdig[k] = static_cast<u32>(rest % root);
          rest /= root;
        }
        // block digits of the pad slice: <0, i_1>, <j_1, i_2>, ..., <j_D, 0>
        std::size_t off = idig[0];
        for (u32 t = 1; t < bd; ++t)
          off = off * alphabet + (static_cast<std::size_t>(jdig[t - 1]) * root + idig[t]);
        off = off * alphabet + static_cast<std::size_t>(jdig[bd - 1]) * root;
        mm.fe[r * side + cmain] = flattened.fe[off];
      }
    }
    HyperMatrix slice(root, bd, std::move(mm));
    rep.shifted = true;
    rep.pt_value = pt_rank_exact(slice, budget).first;
    if (rep.pt_value == 0) {
      rep.pt_bound_log2 = -inf;
      rep.pt_ok = true;
    } else {
      rep.pt_bound_log2 =
          std::log2(static_cast<double>(rep.pt_value)) -
          logn * (bd - std::log2(static_cast<double>(bd)) + 1.0);
      rep.pt_ok = leaves_log2 >= rep.pt_bound_log2 - 1e-9;
    }
    rep.notes += "; pad-slice matrix of order " + std::to_string(bd) +
                 " has exact value " + std::to_string(rep.pt_value);
  }
  return rep;
}

}  // namespace ptw
