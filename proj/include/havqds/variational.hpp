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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "havqds/models.hpp"
#include "havqds/pauli.hpp"

namespace havqds {

/**
 * Product ansatz |psi(theta)> = prod_mu exp(-i theta_mu P_mu) |ref>, where
 * the reference is |+>^n unless explicit amplitudes are given.
 *
 * Rotations act in list order: generator 0 is applied to the reference
 * first. Each generator is one rotation in the circuit, so the CNOT total is
 * the sum of the generators' ladder costs and does not depend on the angles.
 */
struct Ansatz {
  unsigned n_qubits = 0;
  std::vector<PauliString> generators;
  std::vector<double> angles;
  Amplitudes reference;  // empty means |+>^n

  Ansatz() = default;
  explicit Ansatz(unsigned n) : n_qubits(n) {}

  std::size_t size() const { return generators.size(); }
  bool empty() const { return generators.empty(); }
  void append(const PauliString& generator, double angle = 0.0);
  unsigned cnot_total() const;
};

StateVector reference_state(const Ansatz& ansatz);
StateVector prepare(const Ansatz& ansatz);

std::string ansatz_to_json(const Ansatz& ansatz);
Ansatz ansatz_from_json(std::string_view text);

/// |d psi / d theta_mu> for every parameter, computed exactly as the circuit
/// with -i P_mu inserted after rotation mu.
std::vector<Amplitudes> derivative_states(const Ansatz& ansatz);

/**
 * Real- and imaginary-time McLachlan geometry at the current parameters.
 *
 *   A_mn   = 2 Re[<d_m psi|d_n psi> + <d_m psi|psi><d_n psi|psi>]
 *   C_m    = 2 Im[<d_m psi|H|psi> + <psi|d_m psi><H>]
 *   A^R_mn = Re <d_m psi|d_n psi>
 *   C^R_m  = Re <d_m psi|H|psi>
 */
struct GeometrySnapshot {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  Eigen::MatrixXd a_r;
  Eigen::VectorXd c_r;
  double energy = 0.0;
  double variance = 0.0;
};

GeometrySnapshot compute_geometry(const Ansatz& ansatz, const WeightedPauliSum& h);

struct RealTimeGeometry {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
};
struct ImagTimeGeometry {
  Eigen::MatrixXd a_r;
  Eigen::VectorXd c_r;
};
RealTimeGeometry realtime_geometry(const Ansatz& ansatz, const WeightedPauliSum& h);
ImagTimeGeometry imagtime_geometry(const Ansatz& ansatz, const WeightedPauliSum& h);

/// Squared McLachlan distance theta_dot^T A theta_dot - 2 theta_dot . C + 2 Var.
/// Values within -1e-10 of zero are clamped; more negative values throw.
double mclachlan_distance(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double variance,
                          const Eigen::VectorXd& theta_dot);
double mclachlan_distance(const Ansatz& ansatz, const WeightedPauliSum& h,
                          const Eigen::VectorXd& theta_dot);

inline constexpr double kDefaultRegularization = 1e-6;

struct RegularizedSolution {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||(M + lambda I) x - b||
};

/// Solves (M + lambda I) x = b for symmetric positive semidefinite M.
RegularizedSolution solve_regularized(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                      double lambda = kDefaultRegularization);

/// Minimized squared distance at theta_dot = (A + lambda I)^{-1} C.
struct DistanceMinimum {
  Eigen::VectorXd theta_dot;
  double distance_sq = 0.0;
};
DistanceMinimum minimize_distance(const GeometrySnapshot& geometry,
                                  double lambda = kDefaultRegularization);

struct ExpansionOptions {
  double distance_cut = 0.05;       // threshold on the distance itself, not its square
  double min_improvement = 1e-12;   // on the squared distance
  std::size_t max_size = 500;
  double lambda = kDefaultRegularization;
};

struct ExpansionResult {
  Ansatz ansatz;
  GeometrySnapshot geometry;  // geometry of the expanded ansatz
  DistanceMinimum minimum;    // minimized distance for the expanded ansatz
  std::size_t added = 0;
  bool degraded = false;      // stopped with distance above the cut
};

/**
 * Greedy growth from the pool until the minimized distance is at most the
 * cut.
 *
 * Each round tries every pool operator except the current last generator,
 * appended with angle zero, and keeps the one with the smallest minimized
 * squared distance (first in pool order on ties). Growth stops at the cut,
 * when the best candidate improves the squared distance by no more than
 * min_improvement, or at max_size. Zero-angle appends leave the state
 * unchanged, so candidate rows of A and entries of C are computed once per
 * call and the system is extended by Schur complements.
 */
ExpansionResult adaptive_expand(const Ansatz& ansatz, const WeightedPauliSum& h,
                                const OperatorPool& pool, const ExpansionOptions& options = {});

/// theta += (A + lambda I)^{-1} C dt.
Ansatz real_time_step(const Ansatz& ansatz, const WeightedPauliSum& h, double dt,
                      double lambda = kDefaultRegularization);
Ansatz real_time_step(const Ansatz& ansatz, const GeometrySnapshot& geometry, double dt,
                      double lambda = kDefaultRegularization);
/// theta -= (A^R + lambda I)^{-1} C^R dtau.
Ansatz imaginary_time_step(const Ansatz& ansatz, const WeightedPauliSum& h, double dtau,
                           double lambda = kDefaultRegularization);
Ansatz imaginary_time_step(const Ansatz& ansatz, const GeometrySnapshot& geometry, double dtau,
                           double lambda = kDefaultRegularization);

}  // namespace havqds
