#include "covert/conic/sdp.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace covert::conic {

LinearForm& LinearForm::trace(int block, CMat coef, double scale) {
  if (scale != 1.0) coef *= scale;
  dense.push_back({block, std::move(coef)});
  return *this;
}

LinearForm& LinearForm::entry(int block, int row, int col, cdouble coef) {
  entries.push_back({block, row, col, coef});
  return *this;
}

LinearForm& LinearForm::scalar(int index, double coef) {
  scalars.emplace_back(index, coef);
  return *this;
}

LinearForm& LinearForm::offset(double value) {
  constant += value;
  return *this;
}

LinearForm& LinearForm::add(const LinearForm& other, double scale) {
  constant += scale * other.constant;
  for (const auto& d : other.dense) dense.push_back({d.block, scale * d.coef});
  for (const auto& e : other.entries) entries.push_back({e.block, e.row, e.col, scale * e.coef});
  for (const auto& [i, a] : other.scalars) scalars.emplace_back(i, scale * a);
  return *this;
}

int SdpProblem::add_matrix(int dim, std::string name) {
  if (dim < 1) throw std::invalid_argument("add_matrix: dimension must be >= 1");
  dims_.push_back(dim);
  block_names_.push_back(name.empty() ? fmt::format("X{}", dims_.size() - 1) : std::move(name));
  return static_cast<int>(dims_.size()) - 1;
}

int SdpProblem::add_scalar(std::string name, double upper) {
  if (!(upper >= 0.0)) throw std::invalid_argument("add_scalar: upper bound must be >= 0");
  upper_.push_back(upper);
  scalar_names_.push_back(name.empty() ? fmt::format("s{}", upper_.size() - 1) : std::move(name));
  return static_cast<int>(upper_.size()) - 1;
}

void SdpProblem::add_constraint(LinearForm form, Sense sense, double rhs, std::string name) {
  constraints_.push_back({std::move(form), sense, rhs, std::move(name)});
}

void SdpProblem::maximize(LinearForm objective) {
  objective_ = std::move(objective);
  maximize_ = true;
}

void SdpProblem::minimize(LinearForm objective) {
  objective_ = std::move(objective);
  maximize_ = false;
}

namespace {

void check_form(const SdpProblem& p, const LinearForm& f, const std::string& where) {
  auto fail = [&](const std::string& what) { throw std::invalid_argument(where + ": " + what); };
  if (!std::isfinite(f.constant)) fail("non-finite constant");
  for (const auto& d : f.dense) {
    if (d.block < 0 || d.block >= p.num_blocks()) fail("unknown matrix variable");
    const int n = p.block_dim(d.block);
    if (d.coef.rows() != n || d.coef.cols() != n) fail("coefficient shape mismatch");
    if (!d.coef.allFinite()) fail("non-finite coefficient");
    const double scale = std::max(1.0, d.coef.cwiseAbs().maxCoeff());
    if ((d.coef - d.coef.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) fail("coefficient is not Hermitian");
  }
  for (const auto& e : f.entries) {
    if (e.block < 0 || e.block >= p.num_blocks()) fail("unknown matrix variable");
    const int n = p.block_dim(e.block);
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) fail("entry out of range");
    if (!std::isfinite(e.coef.real()) || !std::isfinite(e.coef.imag())) fail("non-finite coefficient");
  }
  for (const auto& [i, a] : f.scalars) {
    if (i < 0 || i >= p.num_scalars()) fail("unknown scalar variable");
    if (!std::isfinite(a)) fail("non-finite coefficient");
  }
}

}  // namespace

void SdpProblem::validate() const {
  check_form(*this, objective_, "objective");
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& c = constraints_[i];
    check_form(*this, c.form, fmt::format("constraint {} ({})", i, c.name));
    if (!std::isfinite(c.rhs)) throw std::invalid_argument(fmt::format("constraint {}: non-finite rhs", i));
  }
}

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::inaccurate: return "inaccurate";
  }
  return "unknown";
}

double evaluate(const LinearForm& f, const std::vector<CMat>& x, const RVec& s) {
  double v = f.constant;
  for (const auto& d : f.dense) v += (d.coef.transpose().array() * x[d.block].array()).sum().real();
  for (const auto& e : f.entries) v += (e.coef * x[e.block](e.row, e.col)).real();
  for (const auto& [i, a] : f.scalars) v += a * s(i);
  return v;
}

// ---------------------------------------------------------------------------
// Real embedding

namespace {

CMat embed_coef(const CMat& c) {
  const Eigen::Index n = c.rows();
  RMat out(2 * n, 2 * n);
  out << c.real(), -c.imag(), c.imag(), c.real();
  return 0.5 * out.cast<cdouble>();
}

LinearForm embed_form(const LinearForm& f, const std::vector<int>& dims) {
  LinearForm g;
  g.constant = f.constant;
  g.scalars = f.scalars;
  for (const auto& d : f.dense) g.dense.push_back({d.block, embed_coef(d.coef)});
  for (const auto& e : f.entries) {
    const int n = dims[e.block];
    // Re(c X_ij) = Re(c) Re X_ij - Im(c) Im X_ij, each averaged over its two copies.
    const double re = 0.5 * e.coef.real();
    const double im = 0.5 * e.coef.imag();
    if (re != 0.0) {
      g.entries.push_back({e.block, e.row, e.col, re});
      g.entries.push_back({e.block, n + e.row, n + e.col, re});
    }
    if (im != 0.0) {
      g.entries.push_back({e.block, n + e.row, e.col, -im});
      g.entries.push_back({e.block, e.row, n + e.col, im});
    }
  }
  return g;
}

}  // namespace

SdpProblem complex_to_real(const SdpProblem& p) {
  SdpProblem out;
  std::vector<int> dims;
  for (int b = 0; b < p.num_blocks(); ++b) {
    dims.push_back(p.block_dim(b));
    out.add_matrix(2 * p.block_dim(b), p.block_name(b));
  }
  for (int s = 0; s < p.num_scalars(); ++s) out.add_scalar(p.scalar_name(s), p.scalar_upper(s));
  for (const auto& c : p.constraints()) out.add_constraint(embed_form(c.form, dims), c.sense, c.rhs, c.name);
  if (p.is_maximize()) {
    out.maximize(embed_form(p.objective(), dims));
  } else {
    out.minimize(embed_form(p.objective(), dims));
  }
  return out;
}

CMat embedded_to_complex(const CMat& e) {
  const Eigen::Index n = e.rows() / 2;
  const RMat r = e.real();
  const RMat re = 0.5 * (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n));
  const RMat im = 0.5 * (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n));
  CMat out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

// ---------------------------------------------------------------------------
// Dump

namespace {

// Every term is written as "T block row col re im", meaning Re(coef X(row, col)).
void dump_form(std::ostream& out, const LinearForm& f) {
  std::size_t count = f.scalars.size() + f.entries.size();
  for (const auto& d : f.dense) count += static_cast<std::size_t>((d.coef.array() != cdouble(0.0)).count());
  fmt::print(out, "{:.17g} {}\n", f.constant, count);
  for (const auto& d : f.dense) {
    for (Eigen::Index r = 0; r < d.coef.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.coef.cols(); ++c) {
        const cdouble v = d.coef(c, r);  // Re tr(C X) = sum Re(C(c, r) X(r, c))
        if (v != cdouble(0.0)) fmt::print(out, "T {} {} {} {:.17g} {:.17g}\n", d.block, r, c, v.real(), v.imag());
      }
    }
  }
  for (const auto& e : f.entries) {
    fmt::print(out, "T {} {} {} {:.17g} {:.17g}\n", e.block, e.row, e.col, e.coef.real(), e.coef.imag());
  }
  for (const auto& [i, a] : f.scalars) fmt::print(out, "S {} {:.17g}\n", i, a);
}

}  // namespace

void write_dump(std::ostream& out, const SdpProblem& p) {
  fmt::print(out, "sdp-dump 1\n");
  fmt::print(out, "sense {}\n", p.is_maximize() ? "max" : "min");
  fmt::print(out, "blocks {}\n", p.num_blocks());
  for (int b = 0; b < p.num_blocks(); ++b) fmt::print(out, "{}\n", p.block_dim(b));
  fmt::print(out, "scalars {}\n", p.num_scalars());
  for (int s = 0; s < p.num_scalars(); ++s) {
    const double u = p.scalar_upper(s);
    fmt::print(out, "{}\n", std::isinf(u) ? std::string("inf") : fmt::format("{:.17g}", u));
  }
  fmt::print(out, "objective ");
  dump_form(out, p.objective());
  fmt::print(out, "constraints {}\n", p.constraints().size());
  for (const auto& c : p.constraints()) {
    const char* sense = c.sense == Sense::le ? "le" : c.sense == Sense::ge ? "ge" : "eq";
    fmt::print(out, "{} {:.17g} ", sense, c.rhs);
    dump_form(out, c.form);
  }
  fmt::print(out, "end\n");
}

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_dump: unexpected end of input");
  return line;
}

// Reads "<constant> <count>" from `head` and the following term lines.
LinearForm read_form(std::istream& in, std::istringstream& head) {
  LinearForm f;
  std::size_t count = 0;
  if (!(head >> f.constant >> count)) throw std::invalid_argument("read_dump: bad form header");
  for (std::size_t t = 0; t < count; ++t) {
    std::istringstream ls(next_line(in));
    std::string kind;
    ls >> kind;
    if (kind == "T") {
      int b, r, c;
      double re, im;
      if (!(ls >> b >> r >> c >> re >> im)) throw std::invalid_argument("read_dump: bad term");
      f.entry(b, r, c, cdouble(re, im));
    } else if (kind == "S") {
      int i;
      double a;
      if (!(ls >> i >> a)) throw std::invalid_argument("read_dump: bad scalar term");
      f.scalar(i, a);
    } else {
      throw std::invalid_argument("read_dump: unknown term kind");
    }
  }
  return f;
}

std::string keyword(const std::string& line, std::istringstream& rest) {
  rest.str(line);
  rest.clear();
  std::string k;
  rest >> k;
  return k;
}

}  // namespace

SdpProblem read_dump(std::istream& in) {
  SdpProblem p;
  if (next_line(in) != "sdp-dump 1") throw std::invalid_argument("read_dump: bad magic");
  std::istringstream ls;
  if (keyword(next_line(in), ls) != "sense") throw std::invalid_argument("read_dump: sense");
  std::string sense;
  ls >> sense;
  if (keyword(next_line(in), ls) != "blocks") throw std::invalid_argument("read_dump: blocks");
  int nb = 0;
  ls >> nb;
  for (int b = 0; b < nb; ++b) p.add_matrix(std::stoi(next_line(in)));
  if (keyword(next_line(in), ls) != "scalars") throw std::invalid_argument("read_dump: scalars");
  int ns = 0;
  ls >> ns;
  for (int s = 0; s < ns; ++s) {
    const std::string u = next_line(in);
    p.add_scalar({}, u == "inf" ? kInf : std::stod(u));
  }
  if (keyword(next_line(in), ls) != "objective") throw std::invalid_argument("read_dump: objective");
  LinearForm obj = read_form(in, ls);
  if (sense == "max") {
    p.maximize(std::move(obj));
  } else {
    p.minimize(std::move(obj));
  }
  if (keyword(next_line(in), ls) != "constraints") throw std::invalid_argument("read_dump: constraints");
  int nc = 0;
  ls >> nc;
  for (int c = 0; c < nc; ++c) {
    const std::string k = keyword(next_line(in), ls);
    double rhs = 0.0;
    ls >> rhs;
    LinearForm f = read_form(in, ls);
    const Sense s = k == "le" ? Sense::le : k == "ge" ? Sense::ge : Sense::eq;
    if (k != "le" && k != "ge" && k != "eq") throw std::invalid_argument("read_dump: constraint sense");
    p.add_constraint(std::move(f), s, rhs);
  }
  if (next_line(in) != "end") throw std::invalid_argument("read_dump: missing end");
  return p;
}

}  // namespace covert::conic
