#include "qdyn/operators.hpp"

#include "qdyn/error.hpp"

#include <cmath>
#include <string>

namespace qdyn {

SiteKind SiteKind::boson(int cutoff) {
  if (cutoff < 1) {
    throw ParameterError("boson site: cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  return SiteKind(Tag::Boson, cutoff);
}

HilbertSpace::HilbertSpace(std::vector<SiteKind> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) {
    throw ParameterError("HilbertSpace: at least one site is required");
  }
  std::size_t dim = 1;
  for (const auto& s : sites_) {
    dim *= static_cast<std::size_t>(s.local_dim());
    if (dim > max_dimension()) {
      throw DimensionLimitError("HilbertSpace: dimension exceeds cap " +
                                std::to_string(max_dimension()));
    }
  }
  total_dim_ = static_cast<Eigen::Index>(dim);
}

HilbertSpace HilbertSpace::spins(int count) {
  if (count < 1) {
    throw ParameterError("spin chain: count must be >= 1");
  }
  return HilbertSpace(std::vector<SiteKind>(static_cast<std::size_t>(count), SiteKind::spin_half()));
}

HilbertSpace HilbertSpace::cavity_array(int cavities, int cutoff) {
  if (cavities < 1) {
    throw ParameterError("cavity array: at least one cavity is required");
  }
  std::vector<SiteKind> sites;
  sites.reserve(2 * static_cast<std::size_t>(cavities));
  for (int i = 0; i < cavities; ++i) {
    sites.push_back(SiteKind::two_level_atom());
    sites.push_back(SiteKind::boson(cutoff));
  }
  return HilbertSpace(std::move(sites));
}

bool HilbertSpace::all_spins() const noexcept {
  for (const auto& s : sites_) {
    if (s.tag() != SiteKind::Tag::SpinHalf) return false;
  }
  return true;
}

ComplexMatrix pauli(PauliKind kind) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (kind) {
    case PauliKind::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliKind::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case PauliKind::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliKind::Raising:
      m(0, 1) = 1.0;
      break;
    case PauliKind::Lowering:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix boson_annihilation(int cutoff) {
  if (cutoff < 1) {
    throw ParameterError("boson_annihilation: cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexMatrix embed(const HilbertSpace& space, int site_index, const ComplexMatrix& local_op) {
  const auto count = static_cast<int>(space.site_count());
  if (site_index < 1 || site_index > count) {
    throw ParameterError("embed: site index " + std::to_string(site_index) +
                         " outside 1.." + std::to_string(count));
  }
  const auto& target = space.sites()[static_cast<std::size_t>(site_index - 1)];
  if (local_op.rows() != target.local_dim() || local_op.cols() != target.local_dim()) {
    throw ShapeError("embed: operator is " + std::to_string(local_op.rows()) + "x" +
                     std::to_string(local_op.cols()) + " but site " +
                     std::to_string(site_index) + " has local dimension " +
                     std::to_string(target.local_dim()));
  }
  // Identities to the left and right collapse into two factors.
  Eigen::Index left = 1;
  Eigen::Index right = 1;
  for (int i = 0; i < count; ++i) {
    const auto d = space.sites()[static_cast<std::size_t>(i)].local_dim();
    if (i < site_index - 1) left *= d;
    if (i > site_index - 1) right *= d;
  }
  ComplexMatrix out = kron(identity(left), local_op);
  return kron(out, identity(right));
}

ComplexMatrix embed_cavity_pair(int cavities, int index, CavityOperator which, int cutoff) {
  if (index < 1 || index > cavities) {
    throw ParameterError("embed_cavity_pair: cavity index " + std::to_string(index) +
                         " outside 1.." + std::to_string(cavities));
  }
  const HilbertSpace space = HilbertSpace::cavity_array(cavities, cutoff);
  if (which == CavityOperator::PhotonAnnihilation) {
    return embed(space, 2 * index, boson_annihilation(cutoff));
  }
  return embed(space, 2 * index - 1, pauli(PauliKind::Raising));
}

}  // namespace qdyn
