#include "nearopt/model.hpp"
#include "nearopt/rng.hpp"

namespace nearopt {

LinearProgram generate_toy_model(uint64_t seed, int n_tech, int n_periods) {
  if (n_tech < 2) throw InputError("toy model needs n_tech >= 2");
  if (n_periods < 1) throw InputError("toy model needs n_periods >= 1");

  Rng rng(substream_seed(0x746f796d6f64ULL, seed));
  LinearProgram m;
  m.name = "toy-s" + std::to_string(seed) + "-t" + std::to_string(n_tech) + "-p" +
           std::to_string(n_periods);

  // Capacity variables first so exploration specs can pick them by prefix.
  std::vector<double> invest(n_tech), opcost(n_tech), cap_max(n_tech);
  for (int t = 0; t < n_tech; ++t) invest[t] = rng.uniform(20.0, 120.0);
  for (int t = 0; t < n_tech; ++t) opcost[t] = rng.uniform(1.0, 12.0);
  for (int t = 0; t < n_tech; ++t) cap_max[t] = rng.uniform(5.0, 25.0);
  std::vector<std::vector<double>> avail(n_tech, std::vector<double>(n_periods));
  for (int t = 0; t < n_tech; ++t)
    for (int p = 0; p < n_periods; ++p) avail[t][p] = rng.uniform(0.3, 1.0);
  std::vector<double> demand(n_periods);
  for (int p = 0; p < n_periods; ++p) {
    double max_supply = 0.0;
    for (int t = 0; t < n_tech; ++t) max_supply += avail[t][p] * cap_max[t];
    demand[p] = rng.uniform(0.3, 0.7) * max_supply;
  }

  for (int t = 0; t < n_tech; ++t)
    m.variables.push_back({"cap_T" + std::to_string(t), 0.0, cap_max[t]});
  for (int t = 0; t < n_tech; ++t)
    for (int p = 0; p < n_periods; ++p)
      m.variables.push_back(
          {"disp_T" + std::to_string(t) + "_P" + std::to_string(p), 0.0, kInf});

  auto disp_index = [&](int t, int p) { return n_tech + t * n_periods + p; };

  for (int t = 0; t < n_tech; ++t) m.objective.emplace_back(t, invest[t]);
  for (int t = 0; t < n_tech; ++t)
    for (int p = 0; p < n_periods; ++p)
      m.objective.emplace_back(disp_index(t, p), opcost[t]);

  // disp <= avail * cap, per (tech, period)
  for (int t = 0; t < n_tech; ++t)
    for (int p = 0; p < n_periods; ++p) {
      SparseRow r;
      r.name = "caplim_T" + std::to_string(t) + "_P" + std::to_string(p);
      r.coeffs = {{t, -avail[t][p]}, {disp_index(t, p), 1.0}};
      r.rhs = 0.0;
      m.inequalities.push_back(std::move(r));
    }
  // sum_t disp = demand, per period
  for (int p = 0; p < n_periods; ++p) {
    SparseRow r;
    r.name = "balance_P" + std::to_string(p);
    for (int t = 0; t < n_tech; ++t) r.coeffs.emplace_back(disp_index(t, p), 1.0);
    r.rhs = demand[p];
    m.equalities.push_back(std::move(r));
  }

  m.validate_and_normalize();
  return m;
}

}  // namespace nearopt
