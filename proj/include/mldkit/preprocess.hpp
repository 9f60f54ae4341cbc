#pragma once

#include <deque>
#include <set>
#include <string>
#include <vector>

#include "mldkit/network.hpp"

namespace mldkit {

enum class HazardKind { GenMinInjection, ShuntIsland, LineChargingIsland };

inline const char* to_string(HazardKind k) {
  switch (k) {
    case HazardKind::GenMinInjection: return "GenMinInjection";
    case HazardKind::ShuntIsland: return "ShuntIsland";
    case HazardKind::LineChargingIsland: return "LineChargingIsland";
  }
  return "?";
}

struct HazardReport {
  HazardKind kind;
  std::vector<int> component_ids;  // affected bus ids (sorted)
  std::string detail;
};

struct ComponentPartition {
  std::vector<std::vector<int>> components;  // bus-id sets, sorted; component
                                             // order by smallest contained id
  std::map<int, std::size_t> component_of;

  bool operator==(const ComponentPartition&) const = default;
};

/// Marks every branch with an out-of-service endpoint, and every
/// generator/load/shunt at an out-of-service bus, out of service.
inline Network propagate_outages(const Network& input) {
  Network net = input;
  auto bus_on = [&](int id) { return net.bus(id).in_service; };
  for (Branch& br : net.branches)
    if (br.in_service && (!bus_on(br.from_bus) || !bus_on(br.to_bus))) br.in_service = false;
  for (Generator& g : net.generators)
    if (g.in_service && !bus_on(g.bus)) g.in_service = false;
  for (Load& l : net.loads)
    if (l.in_service && !bus_on(l.bus)) l.in_service = false;
  for (Shunt& s : net.shunts)
    if (s.in_service && !bus_on(s.bus)) s.in_service = false;
  net.finalize();
  return net;
}

/// Repeatedly deactivates in-service buses of in-service degree 1 that carry
/// no in-service load and no in-service generator, together with the incident
/// branch. A shunt does not protect a bus from removal.
inline Network deactivate_dangling_buses(const Network& input) {
  Network net = input;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Bus& b : net.buses) {
      if (!b.in_service) continue;
      auto from_it = net.branches_from.find(b.id);
      auto to_it = net.branches_to.find(b.id);
      const std::size_t degree = (from_it == net.branches_from.end() ? 0 : from_it->second.size()) +
                                 (to_it == net.branches_to.end() ? 0 : to_it->second.size());
      const bool has_load = net.loads_at.count(b.id) != 0;
      const bool has_gen = net.gens_at.count(b.id) != 0;
      if (degree == 1 && !has_load && !has_gen) {
        b.in_service = false;
        if (from_it != net.branches_from.end())
          for (std::size_t bi : from_it->second) net.branches[bi].in_service = false;
        if (to_it != net.branches_to.end())
          for (std::size_t bi : to_it->second) net.branches[bi].in_service = false;
        for (Shunt& s : net.shunts)
          if (s.bus == b.id) s.in_service = false;
        changed = true;
      }
    }
    if (changed) net.finalize();
  }
  return net;
}

/// Connected components over in-service buses via in-service branches.
/// Components are ordered by their smallest contained bus id.
inline ComponentPartition connected_components(const Network& net) {
  ComponentPartition part;
  std::set<int> seen;
  for (const Bus& root : net.buses) {
    if (!root.in_service || seen.count(root.id)) continue;
    std::vector<int> comp;
    std::deque<int> queue{root.id};
    seen.insert(root.id);
    while (!queue.empty()) {
      int id = queue.front();
      queue.pop_front();
      comp.push_back(id);
      auto visit = [&](int other) {
        if (!seen.count(other)) {
          seen.insert(other);
          queue.push_back(other);
        }
      };
      if (auto it = net.branches_from.find(id); it != net.branches_from.end())
        for (std::size_t bi : it->second) visit(net.branches[bi].to_bus);
      if (auto it = net.branches_to.find(id); it != net.branches_to.end())
        for (std::size_t bi : it->second) visit(net.branches[bi].from_bus);
    }
    std::sort(comp.begin(), comp.end());
    part.components.push_back(std::move(comp));
  }
  std::sort(part.components.begin(), part.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < part.components.size(); ++c)
    for (int id : part.components[c]) part.component_of[id] = c;
  return part;
}

namespace detail {

inline Network deactivate_component(Network net, const std::vector<int>& comp) {
  std::set<int> ids(comp.begin(), comp.end());
  for (Bus& b : net.buses)
    if (ids.count(b.id)) b.in_service = false;
  for (Branch& br : net.branches)
    if (ids.count(br.from_bus) || ids.count(br.to_bus)) br.in_service = false;
  for (Generator& g : net.generators)
    if (ids.count(g.bus)) g.in_service = false;
  for (Load& l : net.loads)
    if (ids.count(l.bus)) l.in_service = false;
  for (Shunt& s : net.shunts)
    if (ids.count(s.bus)) s.in_service = false;
  return net;
}

}  // namespace detail

/// Deactivates every component that has neither an in-service load nor an
/// in-service generator.
inline Network deactivate_dead_components(const Network& input) {
  Network net = input;
  const ComponentPartition part = connected_components(net);
  bool changed = false;
  for (const auto& comp : part.components) {
    bool alive = false;
    for (int id : comp) {
      if (net.loads_at.count(id) || net.gens_at.count(id)) {
        alive = true;
        break;
      }
    }
    if (!alive) {
      net = detail::deactivate_component(std::move(net), comp);
      changed = true;
    }
  }
  if (changed) net.finalize();
  return net;
}

/// Keeps only the component with the most in-service buses (ties broken
/// toward the component containing the smallest bus id).
inline Network largest_component(const Network& input) {
  Network net = input;
  const ComponentPartition part = connected_components(net);
  if (part.components.size() <= 1) return net;
  std::size_t keep = 0;
  for (std::size_t c = 1; c < part.components.size(); ++c)
    if (part.components[c].size() > part.components[keep].size()) keep = c;
  for (std::size_t c = 0; c < part.components.size(); ++c)
    if (c != keep) net = detail::deactivate_component(std::move(net), part.components[c]);
  net.finalize();
  return net;
}

/// Scans each component for the three infeasibility hazards. Advisory only:
/// the network is never modified.
inline std::vector<HazardReport> detect_hazards(const Network& net) {
  std::vector<HazardReport> hazards;
  const ComponentPartition part = connected_components(net);
  for (const auto& comp : part.components) {
    double p_min_total = 0.0;
    double load_active = 0.0;
    double shunt_absorb_max = 0.0;
    std::size_t gen_count = 0, shunt_count = 0, branch_count = 0;
    const Branch* only_branch = nullptr;
    for (int id : comp) {
      if (auto it = net.gens_at.find(id); it != net.gens_at.end())
        for (std::size_t gi : it->second) {
          p_min_total += net.generators[gi].p_min;
          ++gen_count;
        }
      if (auto it = net.loads_at.find(id); it != net.loads_at.end())
        for (std::size_t li : it->second) load_active += net.loads[li].demand.real();
      if (auto it = net.shunts_at.find(id); it != net.shunts_at.end())
        for (std::size_t si : it->second) {
          const Shunt& s = net.shunts[si];
          const double vu = net.bus(s.bus).v_max;
          shunt_absorb_max += std::abs(s.admittance.real()) * vu * vu;
          ++shunt_count;
        }
      if (auto it = net.branches_from.find(id); it != net.branches_from.end())
        for (std::size_t bi : it->second) {
          ++branch_count;
          only_branch = &net.branches[bi];
        }
    }

    if (p_min_total > load_active + shunt_absorb_max) {
      hazards.push_back(
          {HazardKind::GenMinInjection, comp,
           "minimum generator injection " + std::to_string(p_min_total) +
               " p.u. exceeds component load plus maximum shunt absorption " +
               std::to_string(load_active + shunt_absorb_max) + " p.u."});
    }
    if (shunt_count > 0 && gen_count == 0) {
      hazards.push_back({HazardKind::ShuntIsland, comp,
                         "fixed bus shunt in a component with no generation"});
    }
    if (comp.size() == 2 && branch_count == 1 && only_branch != nullptr) {
      const bool has_charging = only_branch->charge_from != Complex{0.0, 0.0} ||
                                only_branch->charge_to != Complex{0.0, 0.0};
      const bool vmin_positive =
          net.bus(comp[0]).v_min > 0.0 && net.bus(comp[1]).v_min > 0.0;
      if (has_charging && vmin_positive) {
        hazards.push_back({HazardKind::LineChargingIsland, comp,
                           "isolated line " + std::to_string(only_branch->from_bus) + "-" +
                               std::to_string(only_branch->to_bus) +
                               " with nonzero charging and positive voltage lower bounds"});
      }
    }
  }
  return hazards;
}

/// propagate -> collect hazards -> dangling buses -> dead components ->
/// largest component. Idempotent.
inline std::pair<Network, std::vector<HazardReport>> preprocess_pipeline(const Network& input) {
  Network net = propagate_outages(input);
  std::vector<HazardReport> hazards = detect_hazards(net);
  net = deactivate_dangling_buses(net);
  net = deactivate_dead_components(net);
  net = largest_component(net);
  return {std::move(net), std::move(hazards)};
}

}  // namespace mldkit
