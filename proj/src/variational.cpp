// Copyright 2026 The HAVQDS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "havqds/variational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace havqds {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::span<Complex> column(MatrixXcd& m, Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

// Columns of a complex matrix viewed as real vectors of interleaved (re, im),
// so that real dot products give Re<a|b>.
Eigen::Map<const MatrixXd> real_view(const MatrixXcd& m) {
  return {reinterpret_cast<const double*>(m.data()), 2 * m.rows(), m.cols()};
}

Eigen::Map<const VectorXcd> complex_view(const Amplitudes& v) {
  return {v.data(), static_cast<Index>(v.size())};
}

// State, H|psi> and derivative columns for one parameter point.
struct Workspace {
  Amplitudes psi;
  Amplitudes h_psi;
  MatrixXcd derivatives;  // dim x N
  VectorXcd psi_overlap;  // <d_m psi|psi>
  VectorXcd h_overlap;    // <d_m psi|H|psi>
  double energy = 0.0;
  double variance = 0.0;
};

void check_register(const Ansatz& ansatz, const WeightedPauliSum& h) {
  if (ansatz.n_qubits == 0) throw std::invalid_argument("ansatz has no register");
  if (!h.empty() && h.n_qubits() != ansatz.n_qubits) {
    throw std::invalid_argument("Hamiltonian and ansatz registers differ");
  }
  if (ansatz.generators.size() != ansatz.angles.size()) {
    throw std::invalid_argument("ansatz generator/angle count mismatch");
  }
  if (!ansatz.reference.empty() && ansatz.reference.size() != (std::size_t{1} << ansatz.n_qubits)) {
    throw std::invalid_argument("ansatz reference has the wrong dimension");
  }
}

// Derivative columns are built in blocks of kBlock parameters. A block is
// held row-major (kBlock amplitudes per basis state) so one pass over the
// basis carries every column of the block through a rotation.
constexpr Index kBlock = 8;

struct BlockRotation {
  std::uint64_t x;
  std::uint64_t z;
  double c;
  double kr, ki;  // -i sin(theta) i^{popcount(x & z)}
};

BlockRotation block_rotation(const PauliString& p, double theta) {
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const double s = std::sin(theta);
  BlockRotation r{x, z, std::cos(theta), 0.0, 0.0};
  switch (std::popcount(x & z) & 3) {
    case 0: r.ki = -s; break;
    case 1: r.kr = s; break;
    case 2: r.ki = s; break;
    default: r.kr = -s; break;
  }
  return r;
}

inline double parity_sign(std::uint64_t b, std::uint64_t z) {
  return (std::popcount(b & z) & 1) ? -1.0 : 1.0;
}

// buf holds dim rows of kBlock complex values as interleaved doubles.
void rotate_block(const BlockRotation& r, std::vector<double>& buf, std::size_t dim) {
  constexpr Index w = 2 * kBlock;
  if (r.x == 0) {
    for (std::size_t b = 0; b < dim; ++b) {
      const double sg = parity_sign(b, r.z);
      const double fr = r.c + sg * r.kr;
      const double fi = sg * r.ki;
      double* row = buf.data() + b * w;
      for (Index j = 0; j < w; j += 2) {
        const double ar = row[j], ai = row[j + 1];
        row[j] = fr * ar - fi * ai;
        row[j + 1] = fr * ai + fi * ar;
      }
    }
    return;
  }
  const unsigned top = static_cast<unsigned>(std::bit_width(r.x) - 1);
  const std::uint64_t low = (std::uint64_t{1} << top) - 1;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::uint64_t b = ((i & ~low) << 1) | (i & low);
    const std::uint64_t bp = b ^ r.x;
    // new[b] = c a[b] + K sgn(bp) a[bp];  new[bp] = c a[bp] + K sgn(b) a[b]
    const double sb = parity_sign(bp, r.z);
    const double sp = parity_sign(b, r.z);
    const double kbr = sb * r.kr, kbi = sb * r.ki;
    const double kpr = sp * r.kr, kpi = sp * r.ki;
    double* u = buf.data() + b * w;
    double* v = buf.data() + bp * w;
    for (Index j = 0; j < w; j += 2) {
      const double ur = u[j], ui = u[j + 1];
      const double vr = v[j], vi = v[j + 1];
      u[j] = r.c * ur + kbr * vr - kbi * vi;
      u[j + 1] = r.c * ui + kbr * vi + kbi * vr;
      v[j] = r.c * vr + kpr * ur - kpi * ui;
      v[j + 1] = r.c * vi + kpr * ui + kpi * ur;
    }
  }
}

// Column k is -i P_k U_k ... U_1 |ref>, then carried through U_{k+1} ... U_N.
void build_derivatives(const Ansatz& ansatz, Amplitudes& psi, MatrixXcd& d) {
  const StateVector ref = reference_state(ansatz);
  psi.assign(ref.amplitudes().begin(), ref.amplitudes().end());
  const std::size_t dim = psi.size();
  const auto count = static_cast<Index>(ansatz.size());
  d.resize(static_cast<Index>(dim), count);
  if (count == 0) return;

  std::vector<BlockRotation> rotations;
  rotations.reserve(ansatz.size());
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    rotations.push_back(block_rotation(ansatz.generators[k], ansatz.angles[k]));
  }
  std::vector<double> buf(dim * 2 * kBlock);
  Amplitudes scratch(dim);
  for (Index m0 = 0; m0 < count; m0 += kBlock) {
    const Index width = std::min(kBlock, count - m0);
    std::fill(buf.begin(), buf.end(), 0.0);
    for (Index j = 0; j < width; ++j) {
      const Index k = m0 + j;
      const PauliString& p = ansatz.generators[k];
      if (j > 0) rotate_block(rotations[k], buf, dim);
      kernels::rotate_inplace(p, ansatz.angles[k], psi);
      kernels::apply_pauli_into(p, psi, scratch);
      for (std::size_t b = 0; b < dim; ++b) {
        // -i * (P psi)
        buf[b * 2 * kBlock + 2 * j] = scratch[b].imag();
        buf[b * 2 * kBlock + 2 * j + 1] = -scratch[b].real();
      }
    }
    for (Index k = m0 + width; k < count; ++k) rotate_block(rotations[k], buf, dim);
    for (Index j = 0; j < width; ++j) {
      Complex* col = d.col(m0 + j).data();
      for (std::size_t b = 0; b < dim; ++b) {
        col[b] = Complex(buf[b * 2 * kBlock + 2 * j], buf[b * 2 * kBlock + 2 * j + 1]);
      }
    }
  }
}

void energy_and_variance(const PauliSumKernel* kernel, Workspace& ws) {
  if (kernel == nullptr) {
    ws.h_psi.assign(ws.psi.size(), Complex{0.0, 0.0});
    ws.energy = 0.0;
    ws.variance = 0.0;
    return;
  }
  ws.h_psi.resize(ws.psi.size());
  kernel->apply(ws.psi, ws.h_psi);
  const Complex e = inner_product(ws.psi, ws.h_psi);
  ws.energy = e.real();
  double var = 0.0;
  for (std::size_t i = 0; i < ws.psi.size(); ++i) var += std::norm(ws.h_psi[i] - ws.energy * ws.psi[i]);
  ws.variance = var;
}

Workspace make_workspace(const Ansatz& ansatz, const WeightedPauliSum& h) {
  check_register(ansatz, h);
  Workspace ws;
  build_derivatives(ansatz, ws.psi, ws.derivatives);
  if (h.empty()) {
    energy_and_variance(nullptr, ws);
  } else {
    const PauliSumKernel kernel(h);
    energy_and_variance(&kernel, ws);
  }
  ws.psi_overlap = ws.derivatives.adjoint() * complex_view(ws.psi);
  ws.h_overlap = ws.derivatives.adjoint() * complex_view(ws.h_psi);
  return ws;
}

GeometrySnapshot geometry_from(const Workspace& ws) {
  const Index count = ws.derivatives.cols();
  GeometrySnapshot g;
  g.energy = ws.energy;
  g.variance = ws.variance;
  if (count == 0) {
    g.a.resize(0, 0);
    g.a_r.resize(0, 0);
    g.c.resize(0);
    g.c_r.resize(0);
    return g;
  }
  const auto w = real_view(ws.derivatives);
  MatrixXd s = MatrixXd::Zero(count, count);
  s.selfadjointView<Eigen::Lower>().rankUpdate(w.transpose());
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  const VectorXd ar = ws.psi_overlap.real();
  const VectorXd ai = ws.psi_overlap.imag();
  g.a_r = s;
  g.a = 2.0 * (s + ar * ar.transpose() - ai * ai.transpose());
  g.c_r = ws.h_overlap.real();
  // Im[g_m + conj(a_m) E]
  g.c = 2.0 * (ws.h_overlap.imag() - ai * ws.energy);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ansatz

void Ansatz::append(const PauliString& generator, double angle) {
  if (generator.n_qubits() != n_qubits) {
    throw std::invalid_argument("Ansatz::append: generator register mismatch");
  }
  generators.push_back(generator);
  angles.push_back(angle);
}

unsigned Ansatz::cnot_total() const {
  unsigned total = 0;
  for (const auto& g : generators) total += cnot_cost(g);
  return total;
}

StateVector reference_state(const Ansatz& ansatz) {
  if (ansatz.reference.empty()) return StateVector::plus(ansatz.n_qubits);
  return {ansatz.n_qubits, ansatz.reference};
}

StateVector prepare(const Ansatz& ansatz) {
  check_register(ansatz, WeightedPauliSum{});
  const StateVector ref = reference_state(ansatz);
  Amplitudes psi(ref.amplitudes().begin(), ref.amplitudes().end());
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    kernels::rotate_inplace(ansatz.generators[k], ansatz.angles[k], psi);
  }
  return {ansatz.n_qubits, std::move(psi)};
}

std::string ansatz_to_json(const Ansatz& ansatz) {
  nlohmann::json j;
  j["n"] = ansatz.n_qubits;
  if (ansatz.reference.empty()) {
    j["reference"] = "plus";
  } else {
    auto& ref = j["reference"] = nlohmann::json::array();
    for (const Complex& a : ansatz.reference) ref.push_back({a.real(), a.imag()});
  }
  auto& ops = j["operators"] = nlohmann::json::array();
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    ops.push_back({ansatz.generators[k].label(), ansatz.angles[k]});
  }
  return j.dump(2);
}

Ansatz ansatz_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Ansatz ansatz(j.at("n").get<unsigned>());
    const auto& ref = j.at("reference");
    if (ref.is_array()) {
      for (const auto& a : ref) ansatz.reference.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      reference_state(ansatz);  // validates size and norm
    } else if (ref.get<std::string>() != "plus") {
      throw std::invalid_argument("ansatz JSON: unknown reference");
    }
    for (const auto& op : j.at("operators")) {
      const auto pauli = PauliString::from_label(op.at(0).get<std::string>());
      if (pauli.n_qubits() != ansatz.n_qubits) {
        throw std::invalid_argument("ansatz JSON: label length differs from n");
      }
      ansatz.append(pauli, op.at(1).get<double>());
    }
    return ansatz;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ansatz JSON: ") + e.what());
  }
}

std::vector<Amplitudes> derivative_states(const Ansatz& ansatz) {
  check_register(ansatz, WeightedPauliSum{});
  Amplitudes psi;
  MatrixXcd d;
  build_derivatives(ansatz, psi, d);
  std::vector<Amplitudes> out;
  out.reserve(static_cast<std::size_t>(d.cols()));
  for (Index m = 0; m < d.cols(); ++m) out.emplace_back(d.col(m).data(), d.col(m).data() + d.rows());
  return out;
}

// ---------------------------------------------------------------------------
// Geometry

GeometrySnapshot compute_geometry(const Ansatz& ansatz, const WeightedPauliSum& h) {
  return geometry_from(make_workspace(ansatz, h));
}

RealTimeGeometry realtime_geometry(const Ansatz& ansatz, const WeightedPauliSum& h) {
  GeometrySnapshot g = compute_geometry(ansatz, h);
  return {std::move(g.a), std::move(g.c)};
}

ImagTimeGeometry imagtime_geometry(const Ansatz& ansatz, const WeightedPauliSum& h) {
  GeometrySnapshot g = compute_geometry(ansatz, h);
  return {std::move(g.a_r), std::move(g.c_r)};
}

double mclachlan_distance(const MatrixXd& a, const VectorXd& c, double variance,
                          const VectorXd& theta_dot) {
  if (theta_dot.size() != c.size() || a.rows() != c.size() || a.cols() != c.size()) {
    throw std::invalid_argument("mclachlan_distance: dimension mismatch");
  }
  const double quad = theta_dot.dot(a * theta_dot);
  const double lin = theta_dot.dot(c);
  const double value = quad - 2.0 * lin + 2.0 * variance;
  if (value >= 0.0) return value;
  const double scale = std::max(1.0, std::abs(quad) + 2.0 * std::abs(lin) + 2.0 * variance);
  if (value >= -1e-10 * scale) return 0.0;
  throw std::logic_error("mclachlan_distance: negative squared distance " + std::to_string(value));
}

double mclachlan_distance(const Ansatz& ansatz, const WeightedPauliSum& h,
                          const VectorXd& theta_dot) {
  const GeometrySnapshot g = compute_geometry(ansatz, h);
  return mclachlan_distance(g.a, g.c, g.variance, theta_dot);
}

RegularizedSolution solve_regularized(const MatrixXd& m, const VectorXd& b, double lambda) {
  if (m.rows() != m.cols() || m.rows() != b.size()) {
    throw std::invalid_argument("solve_regularized: dimension mismatch");
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("solve_regularized: negative lambda");
  RegularizedSolution out;
  if (b.size() == 0) {
    out.x.resize(0);
    return out;
  }
  MatrixXd shifted = m;
  shifted.diagonal().array() += lambda;
  Eigen::LLT<MatrixXd> llt(shifted);
  if (llt.info() == Eigen::Success) {
    out.x = llt.solve(b);
  } else {
    out.x = shifted.completeOrthogonalDecomposition().solve(b);
  }
  if (!out.x.allFinite()) throw std::runtime_error("solve_regularized: non-finite solution");
  out.residual = (shifted * out.x - b).norm();
  return out;
}

DistanceMinimum minimize_distance(const GeometrySnapshot& geometry, double lambda) {
  DistanceMinimum out;
  out.theta_dot = solve_regularized(geometry.a, geometry.c, lambda).x;
  out.distance_sq = mclachlan_distance(geometry.a, geometry.c, geometry.variance, out.theta_dot);
  return out;
}

// ---------------------------------------------------------------------------
// Adaptive expansion

ExpansionResult adaptive_expand(const Ansatz& ansatz, const WeightedPauliSum& h,
                                const OperatorPool& pool, const ExpansionOptions& options) {
  if (!(options.distance_cut > 0.0)) {
    throw std::invalid_argument("adaptive_expand: distance cut must be positive");
  }
  const Workspace ws = make_workspace(ansatz, h);
  ExpansionResult result;
  result.ansatz = ansatz;
  result.geometry = geometry_from(ws);
  result.minimum = minimize_distance(result.geometry, options.lambda);

  auto within_cut = [&] { return std::sqrt(result.minimum.distance_sq) <= options.distance_cut; };
  if (within_cut() || pool.empty()) {
    result.degraded = !within_cut();
    return result;
  }
  if (result.ansatz.size() >= options.max_size) {
    result.degraded = true;
    return result;
  }

  // Candidate data. Appending P with angle 0 leaves |psi> unchanged and adds
  // the derivative column -i P|psi>.
  const auto dim = static_cast<Index>(ws.psi.size());
  const auto pool_size = static_cast<Index>(pool.size());
  MatrixXcd cand(dim, pool_size);
  VectorXd pauli_mean(pool_size);  // <P_k>
  VectorXd c_new(pool_size);
  VectorXd c_r_new(pool_size);
  for (Index k = 0; k < pool_size; ++k) {
    if (pool[k].n_qubits() != ansatz.n_qubits) {
      throw std::invalid_argument("adaptive_expand: pool register mismatch");
    }
    auto col = column(cand, k);
    kernels::apply_pauli_into(pool[k], ws.psi, col);  // P|psi>
    const Complex pm = inner_product(ws.psi, col);
    const Complex ph = inner_product(col, ws.h_psi);  // <P psi|H psi>
    pauli_mean[k] = pm.real();
    c_new[k] = 2.0 * ph.real() - 2.0 * pm.real() * ws.energy;
    c_r_new[k] = -ph.imag();  // Re<-i P psi|H psi> = Re(i <P psi|H psi>)
    for (auto& a : col) a = Complex(a.imag(), -a.real());  // -i P|psi>
  }

  const auto cand_real = real_view(cand);
  // Re<d_m psi|d_k> for current parameters m; grows by one row per append.
  MatrixXd overlap(result.ansatz.size(), pool_size);
  if (!result.ansatz.empty()) overlap.noalias() = real_view(ws.derivatives).transpose() * cand_real;
  VectorXcd psi_overlap = ws.psi_overlap;

  GeometrySnapshot& g = result.geometry;
  const double lambda = options.lambda;
  while (true) {
    const Index count = static_cast<Index>(result.ansatz.size());
    // New column of A for each candidate: 2(Re<d_m|d_k> + Re(a_m * i p_k)).
    MatrixXd b_cols(count, pool_size);
    for (Index k = 0; k < pool_size; ++k) {
      b_cols.col(k) = 2.0 * (overlap.col(k) - psi_overlap.imag() * pauli_mean[k]);
    }

    MatrixXd shifted = g.a;
    shifted.diagonal().array() += lambda;
    Eigen::LLT<MatrixXd> llt(shifted);
    if (count > 0 && llt.info() != Eigen::Success) {
      throw std::runtime_error("adaptive_expand: regularized metric is not positive definite");
    }
    VectorXd w = g.c;
    MatrixXd u = b_cols;
    VectorXd x_old = VectorXd::Zero(count);
    MatrixXd z = MatrixXd::Zero(count, pool_size);
    if (count > 0) {
      llt.matrixL().solveInPlace(w);
      llt.matrixL().solveInPlace(u);
      x_old = llt.matrixU().solve(w);
      z = llt.matrixU().solve(u);
    }
    const double ww = w.squaredNorm();
    const double xx = x_old.squaredNorm();

    Index best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < pool_size; ++k) {
      if (count > 0 && pool[k] == result.ansatz.generators.back()) continue;
      const double diag = 2.0 * (1.0 - pauli_mean[k] * pauli_mean[k]);
      const double schur = diag + lambda - u.col(k).squaredNorm();
      if (!(schur > 1e-14)) continue;
      const double e = c_new[k] - u.col(k).dot(w);
      const double y = e / schur;
      const double q = ww + e * e / schur;
      const double x_norm_sq = xx - 2.0 * y * x_old.dot(z.col(k)) + y * y * z.col(k).squaredNorm() + y * y;
      const double d2 = 2.0 * g.variance - q - lambda * x_norm_sq;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    if (best < 0 || best_d2 > result.minimum.distance_sq - options.min_improvement) {
      result.degraded = true;
      break;
    }

    // Append the winner and extend every cached quantity by one index.
    const double p = pauli_mean[best];
    MatrixXd a(count + 1, count + 1);
    a.topLeftCorner(count, count) = g.a;
    a.block(0, count, count, 1) = b_cols.col(best);
    a.block(count, 0, 1, count) = b_cols.col(best).transpose();
    a(count, count) = 2.0 * (1.0 - p * p);
    g.a = std::move(a);

    MatrixXd a_r(count + 1, count + 1);
    a_r.topLeftCorner(count, count) = g.a_r;
    a_r.block(0, count, count, 1) = overlap.col(best);
    a_r.block(count, 0, 1, count) = overlap.col(best).transpose();
    a_r(count, count) = 1.0;
    g.a_r = std::move(a_r);

    g.c.conservativeResize(count + 1);
    g.c[count] = c_new[best];
    g.c_r.conservativeResize(count + 1);
    g.c_r[count] = c_r_new[best];

    psi_overlap.conservativeResize(count + 1);
    psi_overlap[count] = Complex(0.0, p);  // <-i P psi|psi> = i <P>

    MatrixXd grown(count + 1, pool_size);
    grown.topRows(count) = overlap;
    grown.row(count) = cand_real.col(best).transpose() * cand_real;
    overlap = std::move(grown);

    result.ansatz.append(pool[best], 0.0);
    ++result.added;
    result.minimum = minimize_distance(g, lambda);

    if (within_cut()) {
      result.degraded = false;
      break;
    }
    if (result.ansatz.size() >= options.max_size) {
      result.degraded = true;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Time steps

Ansatz real_time_step(const Ansatz& ansatz, const GeometrySnapshot& geometry, double dt,
                      double lambda) {
  if (!(dt > 0.0)) throw std::invalid_argument("real_time_step: dt must be positive");
  if (static_cast<std::size_t>(geometry.c.size()) != ansatz.size()) {
    throw std::invalid_argument("real_time_step: geometry does not match ansatz");
  }
  Ansatz out = ansatz;
  if (ansatz.empty()) return out;
  const VectorXd rate = solve_regularized(geometry.a, geometry.c, lambda).x;
  for (std::size_t k = 0; k < out.size(); ++k) out.angles[k] += rate[static_cast<Index>(k)] * dt;
  return out;
}

Ansatz real_time_step(const Ansatz& ansatz, const WeightedPauliSum& h, double dt, double lambda) {
  return real_time_step(ansatz, compute_geometry(ansatz, h), dt, lambda);
}

Ansatz imaginary_time_step(const Ansatz& ansatz, const GeometrySnapshot& geometry, double dtau,
                           double lambda) {
  if (!(dtau > 0.0)) throw std::invalid_argument("imaginary_time_step: dtau must be positive");
  if (static_cast<std::size_t>(geometry.c_r.size()) != ansatz.size()) {
    throw std::invalid_argument("imaginary_time_step: geometry does not match ansatz");
  }
  Ansatz out = ansatz;
  if (ansatz.empty()) return out;
  const VectorXd rate = solve_regularized(geometry.a_r, geometry.c_r, lambda).x;
  for (std::size_t k = 0; k < out.size(); ++k) out.angles[k] -= rate[static_cast<Index>(k)] * dtau;
  return out;
}

Ansatz imaginary_time_step(const Ansatz& ansatz, const WeightedPauliSum& h, double dtau,
                           double lambda) {
  return imaginary_time_step(ansatz, compute_geometry(ansatz, h), dtau, lambda);
}

}  // namespace havqds
