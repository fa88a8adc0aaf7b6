#include "crg/sets/suite.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "crg/geometry/serialization.hpp"
#include "crg/model/augment.hpp"

namespace crg::sets {

SetSynthesis synthesize_sets(const model::ClosedLoopCascade& chain,
                             const SetSynthesisOptions& options) {
  SetSynthesis out;
  out.options = options;

  const WeSchedule we = we_schedule(chain, options.k_max);

  // Steady interlacing-disturbance chain in segment form, and the invariant
  // error bounds it produces.
  std::vector<SegmentSum> f_segments;
  std::vector<geometry::Polytope> f_hreps;
  std::vector<geometry::Polytope> xu_infs;
  f_segments.reserve(chain.count());
  for (int i = 0; i < chain.count(); ++i) {
    const model::ClosedLoopSubsystem& cl = chain.loops[i];
    std::vector<SegmentSum> terms;
    for (const auto& [j, coupling] : cl.Phi_in) {
      const Eigen::MatrixXd padded =
          model::pad_coupling_columns(coupling, chain.loops[j].n_z());
      terms.push_back(segment_map(padded, f_segments[j]));
    }
    terms.push_back(
        segment_map(cl.Omega, segment_from_polytope(chain.model.subsystems[i].W)));
    const SegmentSum w_ss = segment_concat(terms);

    const MrpiResult mrpi = mrpi_outer_segments(cl.Phi, w_ss, options.mrpi);
    f_segments.push_back(mrpi.F);
    f_hreps.push_back(mrpi.F_hrep);
    xu_infs.push_back(steady_tightened(cl, mrpi.F));
  }

  const std::vector<MoasSuite> moas_suites =
      moas_decentralized(chain, xu_infs, options.moas, options.w_z_margin);

  for (int i = 0; i < chain.count(); ++i) {
    SubsystemSets sets{
        TighteningSchedule{
            we.per_subsystem[i],
            transient_tightened(chain.loops[i], we.per_subsystem[i], options.k_max),
            f_hreps[i],
            f_segments[i],
            xu_infs[i],
        },
        moas_suites[i],
    };
    out.subsystems.push_back(std::move(sets));
  }
  return out;
}

void save_set_suite(const std::string& dir, const SetSynthesis& synthesis) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  nlohmann::json manifest;
  manifest["schema"] = "set-suite/1";
  manifest["k_max"] = synthesis.options.k_max;
  nlohmann::json subsystems = nlohmann::json::array();

  for (std::size_t i = 0; i < synthesis.subsystems.size(); ++i) {
    const SubsystemSets& sets = synthesis.subsystems[i];
    nlohmann::json entry;
    entry["index"] = i;
    nlohmann::json listing = nlohmann::json::object();

    auto write_set = [&](const std::string& name, const geometry::Polytope& P) {
      const std::string file = "sub" + std::to_string(i) + "_" + name + ".txt";
      std::ofstream stream(fs::path(dir) / file);
      if (!stream)
        throw std::runtime_error("save_set_suite(): cannot open " + file + " for writing");
      stream << geometry::to_text(P);
      listing[name] = {{"file", file},
                       {"dim", P.dim()},
                       {"rows", static_cast<int>(P.num_rows())}};
    };

    write_set("xu_first", sets.tightening.xu.front());
    write_set("xu_last", sets.tightening.xu.back());
    write_set("f_inf", sets.tightening.f_inf);
    write_set("xu_inf", sets.tightening.xu_inf);
    write_set("xu_eps", sets.moas.XU_eps);
    write_set("o_eps", sets.moas.O_eps);
    write_set("o_z", sets.moas.O_z);
    write_set("w_z", sets.moas.W_z);

    entry["sets"] = std::move(listing);
    entry["moas_iterations"] = sets.moas.iterations;
    subsystems.push_back(std::move(entry));
  }
  manifest["subsystems"] = std::move(subsystems);

  std::ofstream stream(fs::path(dir) / "manifest.json");
  if (!stream)
    throw std::runtime_error("save_set_suite(): cannot open manifest.json for writing");
  stream << manifest.dump(2) << "\n";
}

}  // namespace crg::sets
