#pragma once

#include "mldkit/network.hpp"

namespace mldkit {

/// Five-bus cycle {1-2, 2-3, 3-5, 4-5, 1-4} exhibiting the three damage
/// pathologies: a generator with a nonzero minimum injection at bus 3, a
/// fixed shunt at bus 2, and line charging on branch 4-5. Buses 4 and 5
/// carry load; a wide-range generator at bus 1 keeps the intact network
/// solvable.
inline Network five_bus_fixture() {
  Network net;
  net.base_mva = 100.0;

  for (int id = 1; id <= 5; ++id) net.buses.push_back({id, 0.9, 1.1, true});

  auto line = [](int id, int from, int to, double r, double x, double chg) {
    Branch br;
    br.id = id;
    br.from_bus = from;
    br.to_bus = to;
    br.r = r;
    br.x = x;
    br.series_admittance = series_admittance(r, x);
    br.charge_from = Complex{0.0, chg / 2.0};
    br.charge_to = Complex{0.0, chg / 2.0};
    return br;
  };
  net.branches.push_back(line(1, 1, 2, 0.01, 0.1, 0.0));
  net.branches.push_back(line(2, 2, 3, 0.01, 0.1, 0.0));
  net.branches.push_back(line(3, 3, 5, 0.01, 0.1, 0.0));
  net.branches.push_back(line(4, 4, 5, 0.0, 0.04, 0.08));
  net.branches.push_back(line(5, 1, 4, 0.01, 0.1, 0.0));

  Generator slack;
  slack.id = 1;
  slack.bus = 1;
  slack.p_min = 0.0;
  slack.p_max = 10.0;
  slack.q_min = -10.0;
  slack.q_max = 10.0;
  net.generators.push_back(slack);

  Generator must_run;  // nonzero minimum active injection, free reactive
  must_run.id = 2;
  must_run.bus = 3;
  must_run.p_min = 0.10;
  must_run.p_max = 1.00;
  must_run.q_min = -kUnlimited;
  must_run.q_max = kUnlimited;
  net.generators.push_back(must_run);

  net.loads.push_back({1, 4, Complex{0.5, 0.1}, 1.0, true});
  net.loads.push_back({2, 5, Complex{0.5, 0.1}, 1.0, true});

  net.shunts.push_back({1, 2, Complex{0.05, 0.30}, true});

  net.finalize();
  return net;
}

}  // namespace mldkit
