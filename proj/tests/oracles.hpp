// Copyright 2026 The qsop-lab Authors
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

// Brute-force reference computations used only by the tests. They share no
// code paths with the library beyond basis enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qsop/fock.hpp"
#include "qsop/linear_optics.hpp"

namespace qsop::oracle {

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Ryser-free permanent by expansion over permutations; fine for n <= 6.
inline Complex permanent(const Eigen::MatrixXcd& m) {
  const auto n = m.rows();
  if (n == 0) return 1.0;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Complex total = 0.0;
  do {
    Complex p = 1.0;
    for (int i = 0; i < n; ++i) p *= m(i, perm[static_cast<std::size_t>(i)]);
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// <m| U_F |n> = Perm(U[m-rows, n-cols]) / sqrt(prod n! prod m!).
inline Eigen::MatrixXcd fock_matrix(const ModeCircuit& c) {
  const FockBasis in(c.input());
  const FockBasis out(c.output().with_max_photons(c.input().max_photons()));
  const Eigen::MatrixXcd& u = c.matrix();
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out.size()),
                                              static_cast<Eigen::Index>(in.size()));
  for (std::size_t col = 0; col < in.size(); ++col) {
    const Occupation& n = in[col];
    std::vector<int> cols;
    double nf = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      nf *= factorial(n[i]);
      for (int k = 0; k < n[i]; ++k) cols.push_back(static_cast<int>(i));
    }
    for (std::size_t row = 0; row < out.size(); ++row) {
      const Occupation& m = out[row];
      if (total_photons(m) != total_photons(n)) continue;
      std::vector<int> rows;
      double mf = 1.0;
      for (std::size_t j = 0; j < m.size(); ++j) {
        mf *= factorial(m[j]);
        for (int k = 0; k < m[j]; ++k) rows.push_back(static_cast<int>(j));
      }
      const auto sz = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXcd sub(sz, sz);
      for (Eigen::Index a = 0; a < sz; ++a) {
        for (Eigen::Index b = 0; b < sz; ++b) {
          sub(a, b) = u(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
        }
      }
      f(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          permanent(sub) / std::sqrt(nf * mf);
    }
  }
  return f;
}

/// Reduced density matrix on the modes at `kept` positions, by explicit sums.
inline Eigen::MatrixXcd partial_trace(const StateVector& psi, const std::vector<std::size_t>& kept,
                                      const FockBasis& kept_basis) {
  const auto d = static_cast<Eigen::Index>(kept_basis.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  const std::size_t nmodes = psi.reg().size();
  auto split = [&](const Occupation& occ) {
    Occupation k, r;
    for (std::size_t i = 0; i < nmodes; ++i) {
      bool is_kept = false;
      for (auto p : kept) is_kept = is_kept || p == i;
      (is_kept ? k : r).push_back(occ[i]);
    }
    return std::pair{k, r};
  };
  for (const auto& [oa, ca] : psi.amplitudes()) {
    auto [ka, ra] = split(oa);
    for (const auto& [ob, cb] : psi.amplitudes()) {
      auto [kb, rb] = split(ob);
      if (ra != rb) continue;
      const auto i = static_cast<Eigen::Index>(*kept_basis.index_of(ka));
      const auto j = static_cast<Eigen::Index>(*kept_basis.index_of(kb));
      rho(i, j) += ca * std::conj(cb);
    }
  }
  return rho;
}

inline int numerical_rank(const Eigen::MatrixXcd& m, double tol = 1e-8) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r += es.eigenvalues()(i) > tol;
  return r;
}

inline Eigen::MatrixXcd random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

inline StateVector random_state(const ModeRegister& reg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector v(reg);
  for (const auto& occ : enumerate_basis(reg)) v.add(occ, Complex(g(rng), g(rng)));
  return Complex(1.0 / v.norm()) * v;
}

inline ModeRegister numbered_register(std::size_t modes, int max_photons,
                                      const std::string& channel = "m") {
  std::vector<ModeLabel> labels;
  for (std::size_t i = 0; i < modes; ++i) {
    labels.push_back({ModeKind::TimeBin, static_cast<int>(i), channel});
  }
  return ModeRegister(labels, max_photons);
}

}  // namespace qsop::oracle
