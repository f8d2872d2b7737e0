#include "wva_app/commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "wva/constants.hpp"
#include "wva/error.hpp"
#include "wva/grating.hpp"
#include "wva/interferometer.hpp"
#include "wva/metrology.hpp"
#include "wva/noise.hpp"
#include "wva_app/acceptance.hpp"
#include "wva_app/output.hpp"
#include "wva_app/scenario.hpp"

namespace wva::app {

namespace {

using nlohmann::json;

Table spectrum_table(const grating::GratingResponse& r) {
    Table t;
    t.columns = {"omega_rad_s", "wavelength_nm", "re_r", "im_r", "re_t", "im_t",
                 "transmission", "vg_over_vgnative", "n_eff"};
    for (std::size_t i = 0; i < r.omega.size(); ++i) {
        t.add({r.omega[i], omega_to_wavelength(r.omega[i]) * 1e9, r.r[i].real(), r.r[i].imag(), r.t[i].real(),
               r.t[i].imag(), r.transmission[i], r.vg_ratio_transmitted[i], r.effective_index[i]});
    }
    return t;
}

std::size_t nearest(const std::vector<double>& grid, double value) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(grid[i] - value) < std::abs(grid[best] - value)) best = i;
    }
    return best;
}

void cmd_modes(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const auto& g = c.waveguide.geometry;
    const auto modes = waveguide::solve_te_modes(g, c.waveguide.wavelength);
    Table t;
    t.columns = {"mode_index", "effective_index", "propagation_constant_rad_m", "transverse_wavenumber_rad_m",
                 "decay_constant_rad_m", "core_amplitude", "edge_amplitude_plus", "edge_amplitude_minus",
                 "residual"};
    for (const auto& m : modes) {
        t.add({static_cast<double>(m.mode_index), m.effective_index, m.propagation_constant,
               m.transverse_wavenumber, m.decay_constant, m.core_amplitude, m.edge_amplitude_plus,
               m.edge_amplitude_minus, m.residual});
    }
    sink.write_table("modes", t, c.wants("csv"), c.wants("json"));

    Table f;
    f.columns = {"x_m"};
    for (const auto& m : modes) f.columns.push_back("te" + std::to_string(m.mode_index));
    const double span = 3.0 * g.half_width;
    for (const double x : grating::linear_grid(-span, span, 601)) {
        std::vector<double> row{x};
        for (const auto& m : modes) row.push_back(waveguide::evaluate_mode(m, g, x));
        f.add(std::move(row));
    }
    sink.write_table("mode_fields", f, c.wants("csv"), c.wants("json"));

    const double omega = wavelength_to_omega(c.waveguide.wavelength);
    const double vg = waveguide::native_group_velocity(g, omega);
    json summary{{"mode_count", modes.size()},
                 {"native_group_velocity_m_s", round12(vg)},
                 {"native_group_velocity_over_c", round12(vg / speed_of_light)}};
    if (modes.size() >= 2) {
        const waveguide::ModePair pair{g, modes[0], modes[1]};
        summary["alpha"] = round12(waveguide::mode_overlap_alpha(modes[0], modes[1], g));
        summary["displacement_gain"] = round12(interferometer::displacement_gain(pair));
    }
    sink.write_json("modes_summary.json", summary);
    out << "modes: " << modes.size() << " guided, n_eff(TE0) = " << format12(modes[0].effective_index)
        << ", v_g/c = " << format12(vg / speed_of_light) << "\n";
}

void cmd_grating(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const Scenario s(c);
    const auto spec = s.single_grating();
    const auto grid = s.single_grid(c.grating.points, c.grating.span_kappa);
    const auto response = grating::grating_spectrum(spec, grid, s.single_options());
    sink.write_table("grating_single", spectrum_table(response), c.wants("csv"), c.wants("json"));

    Table inf;
    inf.columns = {"omega_rad_s", "wavelength_nm", "detuning_over_kappa", "vg_over_vgnative_infinite"};
    const double kappa = spec.coupling();
    for (const double w : grid) {
        const auto r = grating::infinite_grating_response(spec, w);
        const double ratio = r.group_velocity ? *r.group_velocity / spec.host.group_velocity : std::nan("");
        inf.add({w, omega_to_wavelength(w) * 1e9, kappa > 0.0 ? r.detuning / kappa : std::nan(""), ratio});
    }
    sink.write_table("grating_infinite", inf, c.wants("csv"), c.wants("json"));

    const std::size_t mid = nearest(grid, s.single_bragg_omega());
    out << "grating: kappa L = " << format12(kappa * spec.length) << ", gap-center transmission "
        << format12(response.transmission[mid]) << ", V_g/v_g " << format12(response.vg_ratio_transmitted[mid])
        << "\n";
}

void cmd_double_grating(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const Scenario s(c);
    const auto spec = s.double_grating();
    const auto grid = s.double_grid(c.grating.double_points);
    const auto response = grating::grating_spectrum(spec, grid, s.double_options());
    sink.write_table("double_grating", spectrum_table(response), c.wants("csv"), c.wants("json"));

    const std::size_t mid = nearest(grid, s.omega0());
    json periods = json::array();
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        periods.push_back({{"period_m", round12(spec.components[i].period)},
                           {"index_amplitude", round12(spec.components[i].index_amplitude)},
                           {"coupling_per_m", round12(spec.coupling(i))}});
    }
    sink.write_json("double_grating_summary.json",
                    {{"mid_window_omega_rad_s", round12(grid[mid])},
                     {"mid_window_transmission", round12(response.transmission[mid])},
                     {"mid_window_vg_over_vgnative", round12(response.vg_ratio_transmitted[mid])},
                     {"mid_window_vg_over_vgnative_reflection_phase", round12(response.vg_ratio_reflected[mid])},
                     {"components", periods}});
    out << "double-grating: mid-window transmission " << format12(response.transmission[mid]) << ", V_g/v_g "
        << format12(response.vg_ratio_transmitted[mid]) << "\n";
}

void cmd_dark_port(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const auto modes = waveguide::solve_mode_pair(c.waveguide.geometry, c.waveguide.wavelength);
    const double kappa = c.interferometer.kappa;
    Table summary;
    summary.columns = {"phi_rad", "displacement_signal", "i_left", "i_right", "mean_x_m", "postselect_prob",
                       "mode_ratio_signal"};
    for (std::size_t i = 0; i < c.interferometer.phases.size(); ++i) {
        const double phi = c.interferometer.phases[i];
        const auto dark = interferometer::dark_port_state(interferometer::propagate(phi, kappa));
        const auto readout = interferometer::displacement_signal(dark, modes, c.interferometer.profile_points);
        Table profile;
        profile.columns = {"x_m", "intensity_per_m"};
        for (std::size_t k = 0; k < readout.profile.x.size(); ++k) {
            profile.add({readout.profile.x[k], readout.profile.intensity[k]});
        }
        sink.write_table("dark_port_" + std::to_string(i), profile, c.wants("csv"), c.wants("json"));
        summary.add({phi, readout.signal, readout.profile.i_left, readout.profile.i_right, readout.profile.mean_x,
                     dark.probability(), interferometer::mode_ratio_signal(dark)});
    }
    sink.write_table("dark_port_summary", summary, c.wants("csv"), c.wants("json"));
    out << "dark-port: " << c.interferometer.phases.size() << " profiles at kappa = " << format12(kappa) << "\n";
}

void cmd_sweep(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const Scenario s(c);
    const auto spec = s.double_grating();
    const auto grid = s.sweep_grid();
    for (const double w : grid) {
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
            if (std::abs(spec.detuning(w, i)) < spec.coupling(i)) {
                throw InvalidArgument("sweep window reaches into a band gap at " +
                                      format12(omega_to_wavelength(w) * 1e9) + " nm");
            }
        }
    }
    // The arm phase is the transmitted phase in excess of the host phase.
    const auto response = grating::grating_spectrum(spec, grid, s.double_options());
    interferometer::ReadoutConfig readout{c.interferometer.kappa, c.readout_method()};
    readout.validate();
    Table t;
    t.columns = {"omega_rad_s", "phi_rad", "signal", "postselect_prob"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phi = response.transmitted_phase[i] - spec.host.beta(grid[i]) * spec.length;
        const auto dark = interferometer::dark_port_state(interferometer::propagate(phi, readout.kappa));
        const double signal = readout.method == interferometer::ReadoutMethod::mode_ratio
                                  ? interferometer::mode_ratio_signal(dark)
                                  : interferometer::displacement_signal(dark, s.modes, 0).signal;
        t.add({grid[i], phi, signal, dark.probability()});
    }
    sink.write_table("sweep", t, c.wants("csv"), c.wants("json"));
    out << "sweep: " << grid.size() << " points, " << c.interferometer.readout << " readout\n";
}

json report_json(const metrology::PrecisionReport& r) {
    return {{"architecture", metrology::to_string(r.architecture)},
            {"fisher_per_photon_s2", round12(r.fisher_per_photon)},
            {"qfi_per_photon_s2", round12(r.qfi_per_photon)},
            {"crb_delta_omega_rad_s_per_rthz", round12(r.crb_delta_omega)},
            {"photon_rate_per_s", round12(r.photon_rate)}};
}

void cmd_precision(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const Scenario s(c);
    const double dphi = s.pipeline_dispersion();
    const auto scenario = metrology::PrecisionScenario::at_detected_power(
        c.metrology.detected_power, c.waveguide.wavelength, c.interferometer.kappa, dphi);
    const auto mzi = metrology::precision_report(scenario, metrology::Architecture::mzi);
    const auto wva = metrology::precision_report(scenario, metrology::Architecture::wva);
    const double omega = s.omega0();
    json doc{
        {"scenario",
         {{"detected_power_w", round12(scenario.detected_power)},
          {"input_power_w", round12(scenario.input_power)},
          {"wavelength_m", round12(scenario.wavelength)},
          {"kappa", round12(scenario.kappa)},
          {"dphi_domega_s", round12(scenario.dphi_domega)},
          {"omega_dphi_domega", round12(omega * dphi)},
          {"integration_bandwidth_hz", round12(scenario.integration_bandwidth)}}},
        {"mzi", report_json(mzi)},
        {"wva", report_json(wva)},
        {"sensitivity",
         {{"mzi", round12(metrology::sensitivity(scenario.kappa, omega, dphi, metrology::Architecture::mzi))},
          {"wva", round12(metrology::sensitivity(scenario.kappa, omega, dphi, metrology::Architecture::wva))}}},
        {"paper_parity",
         {{"unit", "rad/s per sqrt(Hz), quoted as Hz/sqrt(Hz)"},
          {"mzi_bound", round12(mzi.crb_delta_omega)},
          {"wva_bound", round12(wva.crb_delta_omega)}}}};
    sink.write_json("precision.json", doc);
    out << "precision: MZI " << format12(mzi.crb_delta_omega) << ", WVA " << format12(wva.crb_delta_omega)
        << " (rad/s)/sqrt(Hz)\n";
}

void cmd_bias_offset(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    using metrology::Architecture;
    const double kappa = c.interferometer.kappa;
    Table t;
    t.columns = {"bias", "phi_rad", "mzi_estimate_rad", "wva_estimate_rad", "mzi_linear_rad", "wva_linear_rad"};
    for (const double b : c.noise.bias_values) {
        for (const double phi : grating::linear_grid(0.0, c.noise.bias_phi_max, c.noise.bias_points)) {
            t.add({b, phi, noise::linear_phase(noise::biased_signal(phi, b, kappa, Architecture::mzi), kappa,
                                               Architecture::mzi),
                   noise::linear_phase(noise::biased_signal(phi, b, kappa, Architecture::wva), kappa,
                                       Architecture::wva),
                   noise::biased_estimate(phi, b, kappa, Architecture::mzi),
                   noise::biased_estimate(phi, b, kappa, Architecture::wva)});
        }
    }
    sink.write_table("bias_offset", t, c.wants("csv"), c.wants("json"));
    out << "bias-offset: suppression factor 2 kappa = " << format12(2.0 * kappa) << "\n";
}

Table trajectory_table(const std::vector<double>& times, const std::vector<double>& bias,
                       const std::vector<double>& mzi, const std::vector<double>& wva) {
    Table t;
    t.columns = {"t_s", "bias", "phi_est_mzi_rad", "phi_est_wva_rad"};
    for (std::size_t i = 0; i < times.size(); ++i) t.add({times[i], bias[i], mzi[i], wva[i]});
    return t;
}

void cmd_drift(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const auto modes = waveguide::solve_mode_pair(c.waveguide.geometry, c.waveguide.wavelength);
    const auto model = c.bias_model();
    const auto ex = noise::simulate_drift_experiment(model, c.drift_config(), modes);
    for (std::size_t k = 0; k < ex.trajectories.size(); ++k) {
        const auto& tr = ex.trajectories[k];
        sink.write_table("drift_trajectory_" + std::to_string(k),
                         trajectory_table(tr.times, tr.bias, tr.phase_estimate_mzi, tr.phase_estimate_wva),
                         c.wants("csv"), c.wants("json"));
    }
    using noise::DriftTrajectory;
    sink.write_table("drift_mean",
                     trajectory_table(ex.trajectories.front().times, noise::trajectory_mean(ex, &DriftTrajectory::bias),
                                      noise::trajectory_mean(ex, &DriftTrajectory::phase_estimate_mzi),
                                      noise::trajectory_mean(ex, &DriftTrajectory::phase_estimate_wva)),
                     c.wants("csv"), c.wants("json"));
    const auto rates = noise::drift_rate_std(ex, model, c.interferometer.kappa);
    sink.write_json("drift_summary.json", {{"seed", c.seed},
                                           {"trajectories", ex.trajectories.size()},
                                           {"photons_per_step", round12(ex.photons_per_step)},
                                           {"mzi_drift_rate_std_deg_per_s", round12(rates.mzi_deg_per_s)},
                                           {"wva_drift_rate_std_deg_per_s", round12(rates.wva_deg_per_s)}});
    out << "drift: " << ex.trajectories.size() << " trajectories, drift-rate std MZI "
        << format12(rates.mzi_deg_per_s) << " deg/s, WVA " << format12(rates.wva_deg_per_s) << " deg/s\n";
}

void cmd_allan(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const auto modes = waveguide::solve_mode_pair(c.waveguide.geometry, c.waveguide.wavelength);
    const auto model = c.bias_model();
    const auto ex = noise::simulate_drift_experiment(model, c.drift_config(), modes);
    const auto cmp = noise::allan_comparison(ex, model.dt);
    Table t;
    t.columns = {"tau_s", "sigma_mzi", "sigma_wva", "ratio"};
    for (const auto& r : cmp.rows) t.add({r.tau, r.sigma_mzi, r.sigma_wva, r.ratio});
    sink.write_table("allan", t, c.wants("csv"), c.wants("json"));
    sink.write_json("allan_summary.json", {{"seed", c.seed},
                                           {"mean_ratio", round12(cmp.mean_ratio)},
                                           {"wva_signal_unit", "micrometre"},
                                           {"right_position_um", round12(ex.right_position_um)}});
    out << "allan: mean WVA/MZI ratio " << format12(cmp.mean_ratio) << "\n";
}

void cmd_thermal(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const Scenario s(c);
    noise::ThermalDriftModel model;
    model.delta_L = c.noise.delta_L;
    model.geometry = c.waveguide.geometry;
    model.thermo = c.waveguide.thermo;
    model.wavelength = c.waveguide.wavelength;
    model.dphi_domega = s.pipeline_dispersion();
    model.t_range = {c.waveguide.t_min, c.waveguide.t_max};
    const auto coeff = noise::effective_thermal_coefficients(model);
    const auto per_degree = noise::thermal_drift(model, coeff, 1.0);
    const auto at_delta = noise::thermal_drift(model, coeff, c.noise.delta_T);

    const auto fit0 = waveguide::thermo_optic_fit(c.waveguide.geometry, c.waveguide.thermo, c.waveguide.wavelength, 0,
                                                  model.t_range);
    const auto fit1 = waveguide::thermo_optic_fit(c.waveguide.geometry, c.waveguide.thermo, c.waveguide.wavelength, 1,
                                                  model.t_range);
    Table t;
    t.columns = {"temperature_c", "n_eff_te0", "n_eff_te1"};
    for (std::size_t i = 0; i < fit0.temperatures.size(); ++i) {
        t.add({fit0.temperatures[i], fit0.effective_indices[i], fit1.effective_indices[i]});
    }
    sink.write_table("thermal_sweep", t, c.wants("csv"), c.wants("json"));
    sink.write_json("thermal.json",
                    {{"dn0_dT_per_c", round12(coeff.dn0_dT)},
                     {"dn1_dT_per_c", round12(coeff.dn1_dT)},
                     {"dphi_dT_rad_per_c", round12(per_degree.delta_phi)},
                     {"domega_over_omega_per_c", round12(per_degree.delta_omega_over_omega)},
                     {"dphi01_dT_rad_per_c", round12(per_degree.mode_mismatch_phi01)},
                     {"delta_T_c", round12(c.noise.delta_T)},
                     {"displacement_signal_factor", round12(at_delta.displacement_signal_factor)}});
    out << "thermal: dphi/dT = " << format12(per_degree.delta_phi) << " rad/C, (1/w) dw/dT = "
        << format12(per_degree.delta_omega_over_omega) << " /C\n";
}

bool cmd_acceptance(const ScenarioConfig& c, OutputSink& sink, std::ostream& out) {
    const auto results = run_acceptance(c, [&](const CriterionResult& r) { out << format_result(r) << std::endl; });
    json doc = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        doc.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    sink.write_json("acceptance.json", doc);
    out << (all ? "acceptance: all criteria passed" : "acceptance: FAILED") << "\n";
    return all;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"modes",      "grating",     "double-grating", "dark-port",
                                                "sweep",      "precision",   "bias-offset",    "drift",
                                                "allan",      "thermal",     "acceptance"};
    return names;
}

int run_subcommand(const std::string& name, const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
    using Handler = std::function<void(const ScenarioConfig&, OutputSink&, std::ostream&)>;
    static const std::map<std::string, Handler> handlers{
        {"modes", cmd_modes},       {"grating", cmd_grating},         {"double-grating", cmd_double_grating},
        {"dark-port", cmd_dark_port}, {"sweep", cmd_sweep},           {"precision", cmd_precision},
        {"bias-offset", cmd_bias_offset}, {"drift", cmd_drift},       {"allan", cmd_allan},
        {"thermal", cmd_thermal}};
    try {
        config.validate();
        OutputSink sink(config.output.directory);
        if (name == "acceptance") {
            const bool ok = cmd_acceptance(config, sink, out);
            sink.commit();
            return ok ? 0 : 1;
        }
        const auto it = handlers.find(name);
        if (it == handlers.end()) {
            err << "unknown subcommand '" << name << "'\n";
            return 1;
        }
        it->second(config, sink, out);
        sink.commit();
        return 0;
    } catch (const std::exception& e) {
        err << "wva " << name << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wva::app
