#ifndef DKC_LATTICE_HPP
#define DKC_LATTICE_HPP

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace dkc {

inline constexpr int kDim = 4;
inline constexpr int kChannels = 16;

// Which of the two identical complexes a chain or cochain lives on.
enum class Copy : std::uint8_t { plain, tilde };

constexpr Copy flip(Copy c) noexcept { return c == Copy::plain ? Copy::tilde : Copy::plain; }

constexpr int binomial4(int r) noexcept {
  constexpr std::array<int, 5> table{1, 4, 6, 4, 1};
  return (r < 0 || r > 4) ? 0 : table[static_cast<std::size_t>(r)];
}

// First flat channel of each degree in the 16-channel layout.
constexpr int channel_offset(int degree) noexcept {
  constexpr std::array<int, 5> table{0, 1, 5, 11, 15};
  return table[static_cast<std::size_t>(degree)];
}

/// Subset of the four axes that carry an edge factor in a basis cell.
///
/// Sets of a given degree are ranked lexicographically by their sorted
/// members, so degree 2 runs 01,02,03,12,13,23.
class DirectionSet {
 public:
  constexpr DirectionSet() noexcept = default;

  static constexpr DirectionSet from_mask(unsigned mask) {
    if (mask > 0xFu) throw std::invalid_argument("direction mask out of range");
    DirectionSet d;
    d.mask_ = static_cast<std::uint8_t>(mask);
    return d;
  }

  static constexpr DirectionSet of(std::initializer_list<int> axes) {
    unsigned m = 0;
    for (int a : axes) {
      if (a < 0 || a >= kDim) throw std::invalid_argument("axis out of range");
      if (m & (1u << a)) throw std::invalid_argument("repeated axis in direction set");
      m |= 1u << a;
    }
    return from_mask(m);
  }

  static constexpr DirectionSet full() noexcept { return DirectionSet{0xF}; }

  static constexpr DirectionSet from_rank(int degree, int rank);

  constexpr unsigned mask() const noexcept { return mask_; }
  constexpr int degree() const noexcept { return std::popcount(static_cast<unsigned>(mask_)); }
  constexpr bool contains(int axis) const noexcept { return (mask_ >> axis) & 1u; }
  constexpr bool empty() const noexcept { return mask_ == 0; }

  constexpr DirectionSet complement() const noexcept { return DirectionSet{0xFu & ~mask_}; }
  constexpr DirectionSet with(int axis) const noexcept { return DirectionSet{mask_ | (1u << axis)}; }
  constexpr DirectionSet without(int axis) const noexcept {
    return DirectionSet{mask_ & ~(1u << axis)};
  }
  constexpr bool disjoint(DirectionSet o) const noexcept { return (mask_ & o.mask_) == 0; }
  constexpr DirectionSet operator|(DirectionSet o) const noexcept {
    return DirectionSet{static_cast<unsigned>(mask_ | o.mask_)};
  }

  // Number of members strictly below `axis`.
  constexpr int position(int axis) const noexcept {
    return std::popcount(static_cast<unsigned>(mask_) & ((1u << axis) - 1u));
  }

  // Sorted members; entries past degree() are -1.
  constexpr std::array<int, 4> members() const noexcept {
    std::array<int, 4> out{-1, -1, -1, -1};
    int n = 0;
    for (int a = 0; a < kDim; ++a)
      if (contains(a)) out[static_cast<std::size_t>(n++)] = a;
    return out;
  }

  constexpr int rank() const noexcept;
  constexpr int channel() const noexcept { return channel_offset(degree()) + rank(); }

  std::string label() const {
    if (empty()) return "-";
    std::string s;
    for (int a = 0; a < kDim; ++a)
      if (contains(a)) s.push_back(static_cast<char>('0' + a));
    return s;
  }

  friend constexpr bool operator==(DirectionSet, DirectionSet) noexcept = default;
  // Orders by degree, then by rank.
  friend constexpr std::strong_ordering operator<=>(DirectionSet a, DirectionSet b) noexcept {
    return a.channel() <=> b.channel();
  }

 private:
  constexpr explicit DirectionSet(unsigned m) noexcept : mask_(static_cast<std::uint8_t>(m)) {}
  std::uint8_t mask_ = 0;
};

namespace detail {

// Masks in flat channel order: degree-major, lexicographic within a degree.
constexpr std::array<std::uint8_t, kChannels> make_channel_masks() {
  std::array<std::uint8_t, kChannels> out{};
  std::size_t n = 0;
  auto lex_less = [](unsigned a, unsigned b) {
    for (int i = 0; i < kDim; ++i) {
      // first differing member decides; lowest axis present in one only
      const unsigned bit = 1u << i;
      if ((a & bit) != (b & bit)) return (a & bit) != 0;
    }
    return false;
  };
  for (int r = 0; r <= kDim; ++r) {
    std::array<unsigned, 6> bucket{};
    std::size_t m = 0;
    for (unsigned mask = 0; mask < 16; ++mask)
      if (std::popcount(mask) == r) bucket[m++] = mask;
    for (std::size_t i = 1; i < m; ++i)
      for (std::size_t j = i; j > 0 && lex_less(bucket[j], bucket[j - 1]); --j) {
        const unsigned t = bucket[j];
        bucket[j] = bucket[j - 1];
        bucket[j - 1] = t;
      }
    for (std::size_t i = 0; i < m; ++i) out[n++] = static_cast<std::uint8_t>(bucket[i]);
  }
  return out;
}

inline constexpr auto kChannelMasks = make_channel_masks();

constexpr std::array<std::uint8_t, 16> make_mask_channels() {
  std::array<std::uint8_t, 16> out{};
  for (std::size_t c = 0; c < kChannels; ++c) out[kChannelMasks[c]] = static_cast<std::uint8_t>(c);
  return out;
}

inline constexpr auto kMaskChannels = make_mask_channels();

}  // namespace detail

constexpr DirectionSet DirectionSet::from_rank(int degree, int rank) {
  if (degree < 0 || degree > kDim || rank < 0 || rank >= binomial4(degree))
    throw std::out_of_range("direction set rank out of range");
  return DirectionSet{detail::kChannelMasks[static_cast<std::size_t>(channel_offset(degree) + rank)]};
}

constexpr int DirectionSet::rank() const noexcept {
  return detail::kMaskChannels[mask_] - channel_offset(degree());
}

constexpr DirectionSet channel_dirs(int channel) {
  return DirectionSet::from_mask(detail::kChannelMasks.at(static_cast<std::size_t>(channel)));
}

// Parity of the permutation obtained by concatenating two disjoint sorted sets.
constexpr int concat_parity(DirectionSet first, DirectionSet second) noexcept {
  int inversions = 0;
  for (int a = 0; a < kDim; ++a)
    if (first.contains(a)) inversions += second.position(a);
  return (inversions % 2 == 0) ? 1 : -1;
}

/// Sign of the permutation (dirs, complement) of (0,1,2,3).
constexpr int levi_civita(DirectionSet dirs) noexcept { return concat_parity(dirs, dirs.complement()); }

/// Sign of the permutation (complement, dirs) of (0,1,2,3).
constexpr int levi_civita_prime(DirectionSet dirs) noexcept {
  return concat_parity(dirs.complement(), dirs);
}

/// -1 when the time slot carries an edge, +1 otherwise.
constexpr int time_sign(DirectionSet dirs) noexcept { return dirs.contains(0) ? -1 : 1; }

/// Lattice coordinates (k0,k1,k2,k3); sites in the volume run 1..N_i.
struct SiteIndex {
  std::array<int, 4> k{1, 1, 1, 1};

  constexpr int operator[](int axis) const { return k[static_cast<std::size_t>(axis)]; }
  constexpr int& operator[](int axis) { return k[static_cast<std::size_t>(axis)]; }

  friend constexpr bool operator==(const SiteIndex&, const SiteIndex&) = default;
  friend constexpr auto operator<=>(const SiteIndex&, const SiteIndex&) = default;
};

enum class BoundaryMode : std::uint8_t { periodic, ghost };

inline std::string to_string(BoundaryMode m) { return m == BoundaryMode::periodic ? "periodic" : "ghost"; }

/// Extents and closure of a finite 4D lattice.
///
/// Periodic: storage is exactly 1..N_i and shifts wrap. Ghost: storage is
/// 1..N_i+margin so forward stencils evaluated on 1..N_i never leave memory.
class LatticeSpec {
 public:
  LatticeSpec() : LatticeSpec({1, 1, 1, 1}) {}

  explicit LatticeSpec(std::array<int, 4> extents, BoundaryMode mode = BoundaryMode::periodic,
                       int ghost_margin = 1)
      : extents_(extents), mode_(mode), margin_(mode == BoundaryMode::ghost ? ghost_margin : 0) {
    for (int n : extents_)
      if (n < 1) throw std::invalid_argument("lattice extents must be positive");
    if (mode_ == BoundaryMode::ghost && ghost_margin < 1)
      throw std::invalid_argument("ghost margin must be at least 1");
    std::size_t s = 1, v = 1;
    for (int a = 0; a < kDim; ++a) {
      s *= static_cast<std::size_t>(storage_extent(a));
      v *= static_cast<std::size_t>(extents_[static_cast<std::size_t>(a)]);
    }
    storage_sites_ = s;
    volume_sites_ = v;
  }

  static LatticeSpec periodic(int n0, int n1, int n2, int n3) { return LatticeSpec({n0, n1, n2, n3}); }
  static LatticeSpec ghost(std::array<int, 4> extents, int margin = 1) {
    return LatticeSpec(extents, BoundaryMode::ghost, margin);
  }

  const std::array<int, 4>& extents() const noexcept { return extents_; }
  int extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
  BoundaryMode mode() const noexcept { return mode_; }
  bool is_periodic() const noexcept { return mode_ == BoundaryMode::periodic; }
  int ghost_margin() const noexcept { return margin_; }

  int storage_extent(int axis) const { return extent(axis) + margin_; }
  std::size_t storage_sites() const noexcept { return storage_sites_; }
  std::size_t volume_sites() const noexcept { return volume_sites_; }

  bool in_storage(const SiteIndex& s) const noexcept {
    for (int a = 0; a < kDim; ++a)
      if (s[a] < 1 || s[a] > storage_extent(a)) return false;
    return true;
  }

  bool in_volume(const SiteIndex& s) const noexcept {
    for (int a = 0; a < kDim; ++a)
      if (s[a] < 1 || s[a] > extent(a)) return false;
    return true;
  }

  // Row-major over storage with k0 slowest.
  std::size_t site_rank(const SiteIndex& s) const {
    if (!in_storage(s)) throw std::out_of_range("site outside lattice storage");
    std::size_t r = 0;
    for (int a = 0; a < kDim; ++a)
      r = r * static_cast<std::size_t>(storage_extent(a)) + static_cast<std::size_t>(s[a] - 1);
    return r;
  }

  SiteIndex site_at(std::size_t rank) const {
    if (rank >= storage_sites_) throw std::out_of_range("site rank outside lattice storage");
    SiteIndex s;
    for (int a = kDim - 1; a >= 0; --a) {
      const auto n = static_cast<std::size_t>(storage_extent(a));
      s[a] = static_cast<int>(rank % n) + 1;
      rank /= n;
    }
    return s;
  }

  // Storage rank of the forward neighbour, or npos when it leaves ghost storage.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t neighbour_rank(std::size_t rank, int axis) const {
    const SiteIndex s = site_at(rank);
    if (!is_periodic() && s[axis] + 1 > storage_extent(axis)) return npos;
    std::size_t stride = 1;
    for (int a = kDim - 1; a > axis; --a) stride *= static_cast<std::size_t>(storage_extent(a));
    if (s[axis] == storage_extent(axis))
      return rank - static_cast<std::size_t>(storage_extent(axis) - 1) * stride;
    return rank + stride;
  }

  /// Visits every site of the volume 1..N_i in storage-rank order.
  template <class F>
  void for_each_volume_site(F&& f) const {
    SiteIndex s;
    for (s[0] = 1; s[0] <= extent(0); ++s[0])
      for (s[1] = 1; s[1] <= extent(1); ++s[1])
        for (s[2] = 1; s[2] <= extent(2); ++s[2])
          for (s[3] = 1; s[3] <= extent(3); ++s[3]) f(s);
  }

  friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) noexcept {
    return a.extents_ == b.extents_ && a.mode_ == b.mode_ && a.margin_ == b.margin_;
  }

 private:
  std::array<int, 4> extents_;
  BoundaryMode mode_;
  int margin_;
  std::size_t storage_sites_ = 1;
  std::size_t volume_sites_ = 1;
};

/// Forward shift along one axis: wraps in periodic mode, may enter the ghost
/// layer in ghost mode, and throws std::out_of_range past the ghost layer.
inline SiteIndex shift(SiteIndex site, int axis, const LatticeSpec& lattice) {
  if (axis < 0 || axis >= kDim) throw std::invalid_argument("axis out of range");
  if (!lattice.in_storage(site)) throw std::out_of_range("site outside lattice storage");
  site[axis] += 1;
  if (lattice.is_periodic()) {
    if (site[axis] > lattice.extent(axis)) site[axis] = 1;
  } else if (site[axis] > lattice.storage_extent(axis)) {
    throw std::out_of_range("shift leaves ghost storage");
  }
  return site;
}

}  // namespace dkc

#endif  // DKC_LATTICE_HPP
