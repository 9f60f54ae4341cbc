#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mldkit {

using Complex = std::complex<double>;

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

/// Angle-difference bounds are clamped into [-kMaxAngleDiff, kMaxAngleDiff]
/// radians; the W-space angle envelope is only valid strictly inside (-pi/2, pi/2).
inline constexpr double kMaxAngleDiff = 1.0472;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct Bus {
  int id = 0;
  double v_min = 0.0;  // p.u. voltage magnitude bounds
  double v_max = 0.0;
  bool in_service = true;

  bool operator==(const Bus&) const = default;
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min = 0.0;  // p.u. active injection bounds
  double p_max = 0.0;
  double q_min = 0.0;  // p.u. reactive bounds, +-inf allowed
  double q_max = 0.0;
  double cost_c0 = 0.0;
  double cost_c1 = 0.0;
  double cost_c2 = 0.0;
  bool in_service = true;

  bool operator==(const Generator&) const = default;
};

struct Load {
  int id = 0;
  int bus = 0;
  Complex demand;          // S^d, p.u.
  double priority = 1.0;   // omega >= 0
  bool in_service = true;

  bool operator==(const Load&) const = default;
};

struct Shunt {
  int id = 0;
  int bus = 0;
  Complex admittance;  // Y^s, p.u.; nonzero when in service
  bool in_service = true;

  bool operator==(const Shunt&) const = default;
};

struct Branch {
  int id = 0;  // 1-based row index of the case file's branch table
  int from_bus = 0;
  int to_bus = 0;
  double r = 0.0;  // source impedance, kept so serialization is exact
  double x = 0.0;
  Complex series_admittance;      // Y = 1/(r + i x)
  Complex charge_from;            // Y^c_ij
  Complex charge_to;              // Y^c_ji
  Complex tap{1.0, 0.0};          // T = t * exp(i theta_t)
  double rating = kUnlimited;     // s^u, p.u.; kUnlimited = no thermal limit
  double angmin = -kMaxAngleDiff; // radians
  double angmax = kMaxAngleDiff;
  bool in_service = true;

  bool operator==(const Branch&) const = default;
};

/// Per-unit network model. Treated as immutable after finalize(); the
/// preprocessing operations copy-and-modify rather than mutate in place.
struct Network {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<Shunt> shunts;

  // Adjacency over the in-service model: indices into the vectors above,
  // keyed by bus id. Only in-service elements at in-service buses appear.
  std::map<int, std::vector<std::size_t>> gens_at;      // G_i
  std::map<int, std::vector<std::size_t>> loads_at;     // L_i
  std::map<int, std::vector<std::size_t>> shunts_at;    // H_i
  std::map<int, std::vector<std::size_t>> branches_from;  // E_i
  std::map<int, std::vector<std::size_t>> branches_to;    // E^R_i

  std::map<int, std::size_t> bus_index;

  const Bus& bus(int id) const {
    auto it = bus_index.find(id);
    if (it == bus_index.end()) throw ValidationError("unknown bus id " + std::to_string(id));
    return buses[it->second];
  }

  bool has_bus(int id) const { return bus_index.count(id) != 0; }

  std::size_t in_service_bus_count() const {
    return static_cast<std::size_t>(
        std::count_if(buses.begin(), buses.end(), [](const Bus& b) { return b.in_service; }));
  }
  std::size_t in_service_branch_count() const {
    return static_cast<std::size_t>(std::count_if(
        branches.begin(), branches.end(), [](const Branch& b) { return b.in_service; }));
  }

  /// Validates invariants and rebuilds the adjacency maps. Must be called
  /// after construction or after toggling any in_service flag.
  void finalize() {
    bus_index.clear();
    for (std::size_t i = 0; i < buses.size(); ++i) {
      const Bus& b = buses[i];
      if (!std::isfinite(b.v_min) || !std::isfinite(b.v_max))
        throw ValidationError("bus " + std::to_string(b.id) + ": non-finite voltage bounds");
      if (b.v_min < 0.0 || b.v_min > b.v_max)
        throw ValidationError("bus " + std::to_string(b.id) + ": requires 0 <= v_min <= v_max");
      if (!bus_index.emplace(b.id, i).second)
        throw ValidationError("duplicate bus id " + std::to_string(b.id));
    }

    gens_at.clear();
    loads_at.clear();
    shunts_at.clear();
    branches_from.clear();
    branches_to.clear();

    check_unique_ids(branches, "branch");
    check_unique_ids(generators, "generator");
    check_unique_ids(loads, "load");
    check_unique_ids(shunts, "shunt");

    for (std::size_t i = 0; i < branches.size(); ++i) {
      const Branch& br = branches[i];
      if (!has_bus(br.from_bus) || !has_bus(br.to_bus))
        throw ValidationError("branch " + std::to_string(br.id) + ": references missing bus");
      if (br.from_bus == br.to_bus)
        throw ValidationError("branch " + std::to_string(br.id) + ": from_bus == to_bus");
      if (std::abs(br.tap) <= 0.0)
        throw ValidationError("branch " + std::to_string(br.id) + ": |tap| must be positive");
      if (!(br.angmin <= br.angmax) || br.angmin < -kMaxAngleDiff - 1e-12 ||
          br.angmax > kMaxAngleDiff + 1e-12)
        throw ValidationError("branch " + std::to_string(br.id) + ": bad angle bounds");
      if (br.in_service && bus(br.from_bus).in_service && bus(br.to_bus).in_service) {
        branches_from[br.from_bus].push_back(i);
        branches_to[br.to_bus].push_back(i);
      }
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const Generator& g = generators[i];
      if (!has_bus(g.bus))
        throw ValidationError("generator " + std::to_string(g.id) + ": references missing bus");
      if (g.p_min > g.p_max || g.q_min > g.q_max)
        throw ValidationError("generator " + std::to_string(g.id) + ": inverted bounds");
      if (g.in_service && bus(g.bus).in_service) gens_at[g.bus].push_back(i);
    }
    for (std::size_t i = 0; i < loads.size(); ++i) {
      const Load& l = loads[i];
      if (!has_bus(l.bus))
        throw ValidationError("load " + std::to_string(l.id) + ": references missing bus");
      if (!(l.priority >= 0.0))
        throw ValidationError("load " + std::to_string(l.id) + ": priority must be >= 0");
      if (l.in_service && bus(l.bus).in_service) loads_at[l.bus].push_back(i);
    }
    for (std::size_t i = 0; i < shunts.size(); ++i) {
      const Shunt& s = shunts[i];
      if (!has_bus(s.bus))
        throw ValidationError("shunt " + std::to_string(s.id) + ": references missing bus");
      if (s.in_service && s.admittance == Complex{0.0, 0.0})
        throw ValidationError("shunt " + std::to_string(s.id) + ": zero admittance in service");
      if (s.in_service && bus(s.bus).in_service) shunts_at[s.bus].push_back(i);
    }
  }

  bool operator==(const Network& other) const {
    return base_mva == other.base_mva && buses == other.buses && branches == other.branches &&
           generators == other.generators && loads == other.loads && shunts == other.shunts;
  }

 private:
  template <typename T>
  static void check_unique_ids(const std::vector<T>& items, const char* kind) {
    std::vector<int> ids;
    ids.reserve(items.size());
    for (const T& t : items) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw ValidationError(std::string("duplicate ") + kind + " id");
  }
};

/// Series admittance Y = 1/(r + i x) of the pi-model branch.
inline Complex series_admittance(double r, double x) {
  if (r == 0.0 && x == 0.0)
    throw std::invalid_argument("series_admittance: zero impedance (ideal branch unsupported)");
  return 1.0 / Complex{r, x};
}

}  // namespace mldkit
