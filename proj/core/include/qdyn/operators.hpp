#pragma once

#include "qdyn/linalg.hpp"

#include <cstddef>
#include <vector>

namespace qdyn {

/// Local degree of freedom on one site.
///
/// Basis conventions: spins |↑⟩=(1,0), |↓⟩=(0,1); atoms |e⟩=(1,0),
/// |g⟩=(0,1); bosons use the Fock basis |0⟩=(1,0,…), |1⟩=(0,1,0,…).
class SiteKind {
 public:
  enum class Tag { SpinHalf, Boson, TwoLevelAtom };

  static SiteKind spin_half() { return SiteKind(Tag::SpinHalf, 0); }
  static SiteKind two_level_atom() { return SiteKind(Tag::TwoLevelAtom, 0); }
  /// Truncated boson with Fock states 0..cutoff; cutoff must be ≥ 1.
  static SiteKind boson(int cutoff);

  Tag tag() const noexcept { return tag_; }
  int cutoff() const noexcept { return cutoff_; }
  Eigen::Index local_dim() const noexcept { return tag_ == Tag::Boson ? cutoff_ + 1 : 2; }

  friend bool operator==(const SiteKind&, const SiteKind&) = default;

 private:
  SiteKind(Tag tag, int cutoff) : tag_(tag), cutoff_(cutoff) {}
  Tag tag_;
  int cutoff_;
};

/// Ordered tensor-product space; the first site is the leftmost Kronecker factor.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<SiteKind> sites);

  static HilbertSpace spins(int count);
  /// L cavities, each an (atom ⊗ photon) pair: sites alternate atom, boson.
  static HilbertSpace cavity_array(int cavities, int cutoff);

  const std::vector<SiteKind>& sites() const noexcept { return sites_; }
  std::size_t site_count() const noexcept { return sites_.size(); }
  Eigen::Index total_dim() const noexcept { return total_dim_; }
  bool all_spins() const noexcept;

 private:
  std::vector<SiteKind> sites_;
  Eigen::Index total_dim_ = 1;
};

enum class PauliKind { X, Y, Z, Raising, Lowering };

/// Pauli matrices with eigenvalues ±1; lowering = (σx − iσy)/2 = |↓⟩⟨↑|.
ComplexMatrix pauli(PauliKind kind);

/// â with â|n⟩ = √n|n−1⟩ on Fock states 0..cutoff.
ComplexMatrix boson_annihilation(int cutoff);

/// 𝟙⊗…⊗op⊗…⊗𝟙 with `local_op` in slot `site_index` (1-based).
ComplexMatrix embed(const HilbertSpace& space, int site_index, const ComplexMatrix& local_op);

enum class CavityOperator { PhotonAnnihilation, AtomRaising };

/// Photon annihilation 𝟙₂⊗â or atom raising σ⁺⊗𝟙 of cavity i (1-based) in an
/// array of L cavities; within a cavity the factor order is atom ⊗ photon.
ComplexMatrix embed_cavity_pair(int cavities, int index, CavityOperator which, int cutoff);

}  // namespace qdyn
