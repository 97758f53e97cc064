#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pentalab/json_io.hpp>
#include <pentalab/reconstruct.hpp>
#include <pentalab/vanishing.hpp>

using namespace pentalab;

namespace {

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const DegenerateConstruction*>(&e) ||
        dynamic_cast<const ZeroVertexLabel*>(&e) || dynamic_cast<const NotLiftable*>(&e))
        return 3;
    if (dynamic_cast<const MapSingularity*>(&e) || dynamic_cast<const SingularMap*>(&e))
        return 4;
    return 1;
}

std::uint64_t default_seed() {
    const char* s = std::getenv("PENTALAB_SEED");
    return s ? std::strtoull(s, nullptr, 10) : 0;
}

void emit(const Json& j, const std::string& output) {
    std::string text = j.dump(2);
    text.push_back('\n');
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw Error("cannot write " + output);
        out << text;
    }
}

Json rat_array(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const Rat& r : v) a.push_back(rat_to_json(r));
    return a;
}

Json invariant_table(const CoordVector& x) {
    Json j;
    j["x"] = coords_to_json(x)["x"];
    j["O"] = rat_array(invariant_profile(x, Parity::Odd));
    j["E"] = rat_array(invariant_profile(x, Parity::Even));
    j["O_n"] = rat_to_json(eval_O(x, x.n));
    j["E_n"] = rat_to_json(eval_E(x, x.n));
    return j;
}

Json omega_table(const TwistedPolygon& p, const CoordVector& x) {
    Json j;
    try {
        auto [o1, o2] = omega_from_invariants(x);
        j["closed_form"] = {rat_to_json(o1), rat_to_json(o2)};
    } catch (const ZeroLeadingInvariant&) {
        j["closed_form"] = nullptr;
    }
    try {
        auto [o1, o2] = omega_invariants(p.monodromy);
        j["geometric"] = {rat_to_json(o1), rat_to_json(o2)};
    } catch (const SingularMap&) {
        j["geometric"] = nullptr;
    }
    return j;
}

/// Static snapshot: the affine images of one period of representatives.
void write_svg(const TwistedPolygon& p, const std::string& path) {
    std::vector<std::pair<double, double>> pts;
    for (const Homog3& h : p.reps) {
        double z = h.v[2].get_d();
        if (z == 0.0) continue;
        pts.emplace_back(h.v[0].get_d() / z, h.v[1].get_d() / z);
    }
    double lo = -1, hi = 1;
    for (auto [a, b] : pts) {
        lo = std::min({lo, a, b});
        hi = std::max({hi, a, b});
    }
    double pad = 0.05 * (hi - lo);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f %.6f", lo - pad, lo - pad,
                  hi - lo + 2 * pad, hi - lo + 2 * pad);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << buf << "\">\n"
        << "  <polygon fill=\"none\" stroke=\"black\" stroke-width=\""
        << (hi - lo) / 200 << "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", pts[i].first,
                      pts[i].second);
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

/// Geometric counterpart of one coordinate involution on the parity-1
/// spaces: alpha2 = delta2 and alpha1 = delta1 delta2 delta1; on
/// parity 3 the two trade places.
TwistedPolygon geo_involution(const TwistedPolygon& p, bool second) {
    bool useDelta2 = (p.parity == 1) == second;
    return useDelta2 ? delta2(p) : delta1(delta2(delta1(p)));
}

struct CommonOpts {
    std::string output;
    std::uint64_t seed = default_seed();
};

int cmd_invariants(const std::string& file, const CommonOpts& common) {
    TwistedPolygon p = polygon_from_json(load_json(file));
    CoordVector x = extract_invariants(p);
    Json j;
    j["command"] = "invariants";
    j["n"] = p.n;
    j["kind"] = (p.kind == TwistedPolygon::Kind::Points) ? "points" : "lines";
    j.update(invariant_table(x));
    j["omega"] = omega_table(p, x);
    j["closed"] = p.closed();
    j["degenerate_coords"] = degeneracy_coords(x, p.kind);
    emit(j, common.output);
    return 0;
}

int cmd_iterate(const std::string& file, long steps, const std::string& svgDir,
                const std::string& map, const CommonOpts& common) {
    TwistedPolygon p = polygon_from_json(load_json(file));
    CoordVector x = extract_invariants(p);
    bool wantSvg = !svgDir.empty();
    if (wantSvg) std::filesystem::create_directories(svgDir);
    Json orbit = Json::array();
    auto snapshot = [&](long step, const CoordVector& v) {
        Json e;
        e["step"] = step;
        e["x"] = coords_to_json(v)["x"];
        Json t = Json::array();
        for (const Rat& r : invariant_tuple(v)) t.push_back(rat_to_json(r));
        e["tuple"] = t;
        orbit.push_back(e);
    };
    auto svg_name = [&](long step) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "step_%03ld.svg", step);
        return (std::filesystem::path(svgDir) / buf).string();
    };
    snapshot(0, x);
    if (wantSvg) write_svg(p, svg_name(0));
    for (long s = 1; s <= steps; ++s) {
        bool second = (map == "alpha2") || (map == "alternate" && s % 2 == 1);
        try {
            x = second ? alpha2(x) : alpha1(x);
            if (wantSvg) {
                p = geo_involution(p, second);
                write_svg(p, svg_name(s));
            }
        } catch (const MapSingularity& e) {
            std::cerr << "singular at step " << s << ": " << e.what() << "\n";
            return 4;
        }
        snapshot(s, x);
    }
    Json j;
    j["command"] = "iterate";
    j["map"] = map;
    j["steps"] = steps;
    j["orbit"] = orbit;
    emit(j, common.output);
    return 0;
}

int cmd_collapse(long N, const CommonOpts& common) {
    Rng rng(common.seed);
    RectilinearPolygon p = rectilinear_polygon(N, rng);
    CoordVector x = extract_invariants(p.edge_lines);
    std::vector<Rat> po = invariant_profile(x, Parity::Odd);
    std::vector<Rat> pe = invariant_profile(x, Parity::Even);
    bool profile = eval_O(x, x.n) == 1 && eval_E(x, x.n) == 1;
    for (long k = 1; k < 2 * N; ++k)
        profile = profile && is_zero(po[static_cast<size_t>(k)]) &&
                  is_zero(pe[static_cast<size_t>(k)]);
    profile = profile && po[static_cast<size_t>(2 * N)] == 2 &&
              pe[static_cast<size_t>(2 * N)] == 2;
    CollapseReport rep = collapse_experiment(p);
    Json j;
    j["command"] = "collapse";
    j["seed"] = common.seed;
    j["N"] = N;
    j["degenerate_profile"] = profile;
    j["collapse_step"] = rep.collapse_step;
    j["fitted_parameter"] = rep.fitted_parameter;
    j["convention"] = rep.convention;
    j["constant_layer"] = rep.constant_layer;
    j["bottom_layer"] = rep.bottom_layer;
    j["sandwich_width"] = rep.sandwich_width;
    emit(j, common.output);
    return (profile && rep.collapse_step > 0) ? 0 : 1;
}

int cmd_condense(const std::string& file, const CommonOpts& common) {
    auto m = matrix_from_json(load_json(file));
    Rng rng(common.seed);
    Rat oracle = det_bareiss(m);
    Json j;
    j["command"] = "condense";
    j["seed"] = common.seed;
    j["size"] = m.size();
    Rat viaCondensation = dodgson_det_robust(m, rng);
    j["det"] = rat_to_json(viaCondensation);
    j["oracle"] = rat_to_json(oracle);
    bool agree = viaCondensation == oracle;
    j["agree"] = agree;
    emit(j, common.output);
    std::cout << rat_to_string(viaCondensation) << "\n";
    return agree ? 0 : 1;
}

int cmd_vanishing(long nMax, const CommonOpts& common) {
    Json rows = Json::array();
    bool ok = true;
    for (long n = 5; n <= nMax; n += 2) {
        VanishingReport rep = vanishing_check(n);
        ok = ok && rep.ok;
        for (const auto& e : rep.entries) {
            Json r;
            r["n"] = n;
            r["v"] = e.v;
            r["lambda"] = e.lambda.real();
            r["margin"] = e.margin;
            r["path_disagreement"] = e.path_disagreement;
            rows.push_back(r);
        }
    }
    Json j;
    j["command"] = "vanishing";
    j["n_max"] = nMax;
    j["ok"] = ok;
    j["table"] = rows;
    emit(j, common.output);
    return ok ? 0 : 1;
}

int cmd_independence(long n, const CommonOpts& common) {
    Rng rng(common.seed);
    RankReport rep = independence_check(n, rng);
    Json j;
    j["command"] = "independence";
    j["seed"] = common.seed;
    j["n"] = n;
    j["rank"] = rep.rank;
    j["expected"] = rep.expected;
    j["pass"] = rep.pass;
    emit(j, common.output);
    return rep.pass ? 0 : 1;
}

int cmd_reconstruct(const std::string& file, const CommonOpts& common) {
    CoordVector x = coords_from_json(load_json(file));
    TwistedPolygon p = build_polypoint(x);
    bool roundTrip = extract_invariants(p) == x;
    Json j;
    j["command"] = "reconstruct";
    j["polygon"] = polygon_to_json(p);
    j["round_trip"] = roundTrip;
    j["omega"] = omega_table(p, x);
    emit(j, common.output);
    return roundTrip ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact pentagram-map laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::simple);

    CommonOpts common;
    app.add_option("-o,--output", common.output, "write the JSON report here instead of stdout");
    app.add_option("--seed", common.seed,
                   "seed for all random draws (default: PENTALAB_SEED or 0)");

    std::string polyFile, matFile, invFile, svgDir, mapName = "alternate";
    long steps = 1, collapseN = 3, vanishingMax = 25, indepN = 5;

    auto* inv = app.add_subcommand("invariants", "invariant table of a polygon file");
    inv->add_option("polygon", polyFile, "polygon JSON file")->required();

    auto* it = app.add_subcommand("iterate", "orbit of the coordinate involutions");
    it->add_option("polygon", polyFile, "polygon JSON file")->required();
    it->add_option("--steps", steps, "number of involution steps")->required()
        ->check(CLI::PositiveNumber);
    it->add_option("--svg", svgDir, "directory for per-step SVG snapshots");
    it->add_option("--map", mapName, "alternate | alpha1 | alpha2")
        ->check(CLI::IsMember({"alternate", "alpha1", "alpha2"}));

    auto* co = app.add_subcommand("collapse", "rectilinear polygon collapse experiment");
    co->add_option("--N", collapseN, "quarter-period of the 4N-gon")->required()
        ->check(CLI::Range(3L, 1000L));

    auto* cd = app.add_subcommand("condense", "determinant by condensation, with oracle");
    cd->add_option("matrix", matFile, "square matrix JSON file")->required();

    auto* va = app.add_subcommand("vanishing", "root-of-unity margin table");
    va->add_option("--n-max", vanishingMax, "largest odd period")->check(CLI::Range(5L, 99L));

    auto* in = app.add_subcommand("independence", "Jacobian rank of the invariant tuple");
    in->add_option("--n", indepN, "period")->required()->check(CLI::Range(3L, 40L));

    auto* re = app.add_subcommand("reconstruct", "polygon from an invariants file");
    re->add_option("invariants", invFile, "invariants JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (inv->parsed()) return cmd_invariants(polyFile, common);
        if (it->parsed()) return cmd_iterate(polyFile, steps, svgDir, mapName, common);
        if (co->parsed()) return cmd_collapse(collapseN, common);
        if (cd->parsed()) return cmd_condense(matFile, common);
        if (va->parsed()) return cmd_vanishing(vanishingMax, common);
        if (in->parsed()) return cmd_independence(indepN, common);
        if (re->parsed()) return cmd_reconstruct(invFile, common);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 1;
}
