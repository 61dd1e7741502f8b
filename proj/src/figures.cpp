#include "duomode/figures.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "duomode/analytic.hpp"
#include "duomode/csvfmt.hpp"
#include "duomode/model.hpp"

namespace duomode {

namespace {

constexpr int kAbscissaPoints = 200;  // uniform sampling of the swept axis
constexpr int kSecondaryPoints = 41;  // n-axis of the 2-D figures
constexpr double kNMax = 3.0;         // n range [0, 3] for the 2-D figures

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

using Extractor = std::function<std::string(const SteadyStateReport&)>;

std::string degree_cell(const SteadyStateReport& rep, double SteadyStateReport::* field) {
    return rep.degrees_defined ? fmt12(rep.*field) : std::string{};
}

void emit_rows(std::ostream& out, const std::vector<std::string>& quantity_names,
               const std::vector<std::pair<SystemParams, ReservoirSpec>>& points,
               const std::vector<Extractor>& extract) {
    out << "kappa,g,lambda,phi,n,m,stable";
    for (const auto& q : quantity_names) out << ',' << q;
    out << '\n';
    for (const auto& [params, res] : points) {
        const bool stable = stability(params);
        out << fmt12(params.kappa()) << ',' << fmt12(params.g()) << ','
            << fmt12(params.lambda()) << ',' << fmt12(params.phi()) << ',' << fmt12(res.n())
            << ',' << fmt12(res.m()) << ',' << (stable ? "true" : "false");
        if (stable) {
            const SteadyStateReport rep = steady_state_report(params, res);
            for (const auto& ex : extract) out << ',' << ex(rep);
        } else {
            for (std::size_t i = 0; i < extract.size(); ++i) out << ',';
        }
        out << '\n';
    }
}

void figure_pop_a_vs_lambda(std::ostream& out, double g) {
    // pop_a against the linear coupling in [0, g], n = 0.1, quantum-max m,
    // two phase slices.
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    const ReservoirSpec res = ReservoirSpec::quantum_max(0.1);
    for (double phi : {0.0, M_PI / 2.0}) {
        for (double l : linspace(0.0, g, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, l, phi}, res);
        }
    }
    emit_rows(out, {"pop_a"}, points,
              {[](const SteadyStateReport& r) { return fmt12(r.pop_a); }});
}

void figure5(std::ostream& out) {
    // X-quadrature variance against g in [0, lambda] for vacuum reservoirs.
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    const ReservoirSpec res = ReservoirSpec::thermal(0.0);
    for (double l : {5.0, 10.0, 15.0, 20.0}) {
        for (double g : linspace(0.0, l, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, l, 0.0}, res);
        }
    }
    emit_rows(out, {"var_x"}, points,
              {[](const SteadyStateReport& r) { return fmt12(r.var_xa); }});
}

void figure_eta_grid(std::ostream& out, double lambda, MMode mmode, double phi) {
    // eta_aa / eta_bb over (g, n); g in [0, lambda], n in [0, 3].
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    for (double n : linspace(0.0, kNMax, kSecondaryPoints)) {
        const ReservoirSpec res = make_reservoir(n, mmode);
        for (double g : linspace(0.0, lambda, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, lambda, phi}, res);
        }
    }
    emit_rows(out, {"eta_aa", "eta_bb"}, points,
              {[](const SteadyStateReport& r) { return degree_cell(r, &SteadyStateReport::eta_aa); },
               [](const SteadyStateReport& r) { return degree_cell(r, &SteadyStateReport::eta_bb); }});
}

void figure8(std::ostream& out) {
    // eta_bb against g for n = 1, lambda = 5, phi = pi/2, m/n in
    // {0.5, 0.75, 0.9, 1}.
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    const double n = 1.0;
    for (double frac : {0.5, 0.75, 0.9, 1.0}) {
        const ReservoirSpec res{n, frac * n};
        for (double g : linspace(0.0, 5.0, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, 5.0, M_PI / 2.0}, res);
        }
    }
    emit_rows(out, {"eta_bb"}, points,
              {[](const SteadyStateReport& r) { return degree_cell(r, &SteadyStateReport::eta_bb); }});
}

void figure9(std::ostream& out) {
    // gamma_ab over (g, n) for lambda = kappa, quantum-max m, phi = pi/2.
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    for (double n : linspace(0.0, kNMax, kSecondaryPoints)) {
        const ReservoirSpec res = ReservoirSpec::quantum_max(n);
        for (double g : linspace(0.0, 1.0, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, 1.0, M_PI / 2.0}, res);
        }
    }
    emit_rows(out, {"gamma_ab"}, points,
              {[](const SteadyStateReport& r) { return degree_cell(r, &SteadyStateReport::gamma_ab); }});
}

void figure10(std::ostream& out) {
    // eta_ab over (g, n) for lambda = 0.8, classical-max m, phi = 0.
    std::vector<std::pair<SystemParams, ReservoirSpec>> points;
    const double lambda = 0.8;
    for (double n : linspace(0.0, kNMax, kSecondaryPoints)) {
        const ReservoirSpec res = ReservoirSpec::classical_max(n);
        for (double g : linspace(0.0, lambda, kAbscissaPoints)) {
            points.emplace_back(SystemParams{1.0, g, lambda, 0.0}, res);
        }
    }
    emit_rows(out, {"eta_ab"}, points,
              {[](const SteadyStateReport& r) { return degree_cell(r, &SteadyStateReport::eta_ab); }});
}

}  // namespace

std::optional<FigureId> figure_from_name(const std::string& name) {
    if (name == "fig2a") return FigureId::Fig2a;
    if (name == "fig2b") return FigureId::Fig2b;
    if (name == "fig5") return FigureId::Fig5;
    if (name == "fig6") return FigureId::Fig6;
    if (name == "fig7") return FigureId::Fig7;
    if (name == "fig8") return FigureId::Fig8;
    if (name == "fig9") return FigureId::Fig9;
    if (name == "fig10") return FigureId::Fig10;
    return std::nullopt;
}

void write_figure(FigureId id, std::ostream& out, std::optional<double> lambda_override) {
    switch (id) {
        case FigureId::Fig2a: figure_pop_a_vs_lambda(out, 0.5); break;
        case FigureId::Fig2b: figure_pop_a_vs_lambda(out, 0.99); break;
        case FigureId::Fig5: figure5(out); break;
        case FigureId::Fig6: figure_eta_grid(out, 5.0, MMode::Thermal, 0.0); break;
        case FigureId::Fig7:
            figure_eta_grid(out, lambda_override.value_or(0.8), MMode::QuantumMax, 0.0);
            break;
        case FigureId::Fig8: figure8(out); break;
        case FigureId::Fig9: figure9(out); break;
        case FigureId::Fig10: figure10(out); break;
    }
}

}  // namespace duomode
