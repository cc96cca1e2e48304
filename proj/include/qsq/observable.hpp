// Copyright 2026 The QSQ Authors
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

#ifndef QSQ_OBSERVABLE_HPP_
#define QSQ_OBSERVABLE_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsq/boolean_function.hpp"

namespace qsq {

/// Dense observables act on (n+1)-qubit states; their 2^{n+1} x 2^{n+1}
/// matrices are capped at this dimension to keep eigendecompositions sane.
inline constexpr int kMaxDenseDimension = 10;

/// Hermiticity / operator-norm slack for validating dense matrices.
inline constexpr double kNormTolerance = 1e-9;

/// Index of the computational-basis vector |x, b> of an example state:
/// the label qubit is the least-significant position.
inline std::size_t basis_index(std::uint32_t x, int label_bit) {
  return (static_cast<std::size_t>(x) << 1) | static_cast<unsigned>(label_bit);
}

/// Observable diagonal in the computational basis: phi(x, y) for inputs x and
/// labels y in {-1,+1}.  Stored as 2^{n+1} doubles, the +1-label block first.
class DiagonalObservable {
 public:
  DiagonalObservable(int n, std::vector<double> phi)
      : n_(n), phi_(std::move(phi)) {
    check_dimension(n_);
    if (phi_.size() != 2 * table_size(n_)) {
      throw std::invalid_argument("diagonal observable needs 2^{n+1} values");
    }
    for (double v : phi_) {
      if (!(std::abs(v) <= 1.0)) {
        throw std::invalid_argument(
            "diagonal observable exceeds operator norm 1");
      }
    }
  }

  int dimension() const { return n_; }
  const std::vector<double>& phi() const { return phi_; }

  /// phi(x, label) with label in {-1, +1}.
  double value(std::uint32_t x, int label) const {
    return phi_[(label == -1 ? table_size(n_) : 0) + x];
  }

 private:
  int n_;
  std::vector<double> phi_;
};

/// The Fourier-mass projector for a pattern T: conjugate of the diagonal
/// projector sum_{S in T} |S,1><S,1| by Hadamards on all n+1 qubits.  On the
/// example state of a function f it evaluates to (1/2) sum_{S in T} f^(S)^2;
/// consumers that want the plain mass double the oracle's answer.
class FourierMassObservable {
 public:
  explicit FourierMassObservable(SubsetPattern pattern)
      : pattern_(std::move(pattern)) {}

  int dimension() const { return pattern_.dimension(); }
  const SubsetPattern& pattern() const { return pattern_; }

 private:
  SubsetPattern pattern_;
};

/// Arbitrary Hermitian observable with operator norm at most 1, held with its
/// eigendecomposition (needed for Born-rule measurement sampling).
class DenseObservable {
 public:
  DenseObservable(int n, Eigen::MatrixXcd matrix)
      : n_(n), matrix_(std::move(matrix)) {
    check_dimension(n_);
    if (n_ > kMaxDenseDimension) {
      throw std::invalid_argument("dense observables support n <= " +
                                  std::to_string(kMaxDenseDimension));
    }
    const auto dim = static_cast<Eigen::Index>(2 * table_size(n_));
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
      throw std::invalid_argument("dense observable must be 2^{n+1} square");
    }
    const double herm_defect =
        (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > kNormTolerance) {
      throw std::invalid_argument("dense observable is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    const double norm = eigenvalues_.cwiseAbs().maxCoeff();
    if (norm > 1.0 + kNormTolerance) {
      throw std::invalid_argument("dense observable exceeds operator norm 1");
    }
  }

  int dimension() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }

 private:
  int n_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

using Observable = std::variant<DiagonalObservable, FourierMassObservable,
                                DenseObservable>;

inline int observable_dimension(const Observable& m) {
  return std::visit([](const auto& obs) { return obs.dimension(); }, m);
}

inline std::string observable_kind(const Observable& m) {
  struct Namer {
    std::string operator()(const DiagonalObservable&) const {
      return "diagonal";
    }
    std::string operator()(const FourierMassObservable&) const {
      return "fourier_mass";
    }
    std::string operator()(const DenseObservable&) const { return "dense"; }
  };
  return std::visit(Namer{}, m);
}

inline Observable diagonal_from_phi(int n, std::vector<double> phi) {
  return DiagonalObservable(n, std::move(phi));
}

inline Observable fourier_mass_observable(SubsetPattern pattern) {
  return FourierMassObservable(std::move(pattern));
}

/// phi(x, y) = y * chi_V(x): its noiseless uniform expectation is the single
/// Fourier coefficient c^(V).
inline Observable coefficient_observable(int n, SetIndex v) {
  BooleanFunction::check_set(n, v);
  std::vector<double> phi(2 * table_size(n));
  for (std::uint32_t x = 0; x < table_size(n); ++x) {
    const double chi = static_cast<double>(parity_character(v, x));
    phi[x] = chi;                  // label +1
    phi[table_size(n) + x] = -chi;  // label -1
  }
  return DiagonalObservable(n, std::move(phi));
}

/// Full 2^{n+1} x 2^{n+1} matrix of H^{(n+1)}, used by cross-checks.
inline Eigen::MatrixXd full_hadamard(int n) {
  const auto dim = static_cast<Eigen::Index>(2 * table_size(n));
  const double scale =
      1.0 / std::sqrt(static_cast<double>(static_cast<std::size_t>(dim)));
  Eigen::MatrixXd h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const int par = std::popcount(static_cast<std::uint64_t>(i) &
                                    static_cast<std::uint64_t>(j)) &
                      1;
      h(i, j) = (par ? -scale : scale);
    }
  }
  return h;
}

/// Materializes an observable as an explicit matrix in the |x, b> basis.
/// For Fourier-mass observables this builds the conjugated projector from
/// first principles (explicit Hadamard sandwich), deliberately not sharing
/// any algebra with the structured fast path, so the two can cross-check
/// each other.
inline Eigen::MatrixXcd materialize(const Observable& m) {
  const int n = observable_dimension(m);
  if (n > kMaxDenseDimension) {
    throw std::invalid_argument("materialize: dimension too large");
  }
  const auto dim = static_cast<Eigen::Index>(2 * table_size(n));
  struct Builder {
    int n;
    Eigen::Index dim;

    Eigen::MatrixXcd operator()(const DiagonalObservable& obs) const {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
      for (std::uint32_t x = 0; x < table_size(n); ++x) {
        for (int b = 0; b < 2; ++b) {
          const auto idx = static_cast<Eigen::Index>(basis_index(x, b));
          out(idx, idx) = obs.value(x, b == 1 ? -1 : +1);
        }
      }
      return out;
    }

    Eigen::MatrixXcd operator()(const FourierMassObservable& obs) const {
      // sum_{S in T} |S,1><S,1| in the computational basis...
      Eigen::MatrixXd projector = Eigen::MatrixXd::Zero(dim, dim);
      obs.pattern().for_each_match([&](SetIndex s) {
        const auto idx = static_cast<Eigen::Index>(basis_index(s, 1));
        projector(idx, idx) = 1.0;
      });
      // ...conjugated by Hadamards on every qubit.
      const Eigen::MatrixXd h = full_hadamard(n);
      return (h * projector * h).cast<std::complex<double>>();
    }

    Eigen::MatrixXcd operator()(const DenseObservable& obs) const {
      return obs.matrix();
    }
  };
  return std::visit(Builder{n, dim}, m);
}

}  // namespace qsq

#endif  // QSQ_OBSERVABLE_HPP_
