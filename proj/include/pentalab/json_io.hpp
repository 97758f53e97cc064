#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "condensation.hpp"
#include "dynamics.hpp"

namespace pentalab {

using Json = nlohmann::ordered_json;

/// Rationals travel as strings "p/q" so files stay exact.

inline Json rat_to_json(const Rat& r) { return rat_to_string(r); }

inline Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw ParseError("expected a rational string, got " + j.dump());
    try {
        return rat_from_string(j.get<std::string>());
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

inline Json polygon_to_json(const TwistedPolygon& p) {
    Json j;
    j["n"] = p.n;
    j["kind"] = (p.kind == TwistedPolygon::Kind::Points) ? "points" : "lines";
    j["parity"] = p.parity;
    Json reps = Json::array();
    for (const auto& h : p.reps)
        reps.push_back({rat_to_json(h.v[0]), rat_to_json(h.v[1]), rat_to_json(h.v[2])});
    j["reps"] = reps;
    if (!p.closed()) {
        Json m = Json::array();
        for (int r = 0; r < 3; ++r)
            m.push_back({rat_to_json(p.monodromy.at(r, 0)), rat_to_json(p.monodromy.at(r, 1)),
                         rat_to_json(p.monodromy.at(r, 2))});
        j["monodromy"] = m;
    }
    return j;
}

inline TwistedPolygon polygon_from_json(const Json& j) {
    TwistedPolygon p;
    try {
        p.n = j.at("n").get<long>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "points")
            p.kind = TwistedPolygon::Kind::Points;
        else if (kind == "lines")
            p.kind = TwistedPolygon::Kind::Lines;
        else
            throw ParseError("kind must be \"points\" or \"lines\"");
        p.parity = j.at("parity").get<int>();
        if (p.parity != 1 && p.parity != 3) throw ParseError("parity must be 1 or 3");
        if (p.n < 3) throw ParseError("n must be at least 3");
        const Json& reps = j.at("reps");
        if (static_cast<long>(reps.size()) != p.n)
            throw ParseError("expected " + std::to_string(p.n) + " representatives");
        for (const auto& row : reps) {
            if (row.size() != 3) throw ParseError("representatives have three coordinates");
            Homog3 h{rat_from_json(row[0]), rat_from_json(row[1]), rat_from_json(row[2])};
            if (h.is_zero()) throw ParseError("zero homogeneous vector");
            p.reps.push_back(h);
        }
        if (j.contains("monodromy")) {
            const Json& m = j.at("monodromy");
            if (m.size() != 3) throw ParseError("monodromy must be 3x3");
            for (int r = 0; r < 3; ++r) {
                if (m[static_cast<size_t>(r)].size() != 3)
                    throw ParseError("monodromy must be 3x3");
                for (int c = 0; c < 3; ++c)
                    p.monodromy.at(r, c) = rat_from_json(m[static_cast<size_t>(r)][static_cast<size_t>(c)]);
            }
            if (is_zero(p.monodromy.det())) throw ParseError("monodromy is singular");
        }
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
    return p;
}

inline Json coords_to_json(const CoordVector& v) {
    Json j;
    j["n"] = v.n;
    Json xs = Json::array();
    for (long i = 1; i <= 2 * v.n; ++i) xs.push_back(rat_to_json(v(i)));
    j["x"] = xs;
    return j;
}

inline CoordVector coords_from_json(const Json& j) {
    try {
        long n = j.at("n").get<long>();
        if (n < 3) throw ParseError("n must be at least 3");
        const Json& xs = j.at("x");
        if (static_cast<long>(xs.size()) != 2 * n)
            throw ParseError("expected " + std::to_string(2 * n) + " coordinates");
        CoordVector v(n);
        for (long i = 0; i < 2 * n; ++i) v(i + 1) = rat_from_json(xs[static_cast<size_t>(i)]);
        return v;
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
}

inline std::vector<std::vector<Rat>> matrix_from_json(const Json& j) {
    try {
        std::vector<std::vector<Rat>> m;
        if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty matrix");
        for (const auto& row : j) {
            std::vector<Rat> r;
            for (const auto& e : row) r.push_back(rat_from_json(e));
            if (r.size() != j[0].size()) throw ParseError("ragged matrix");
            m.push_back(std::move(r));
        }
        if (m.size() != m[0].size()) throw ParseError("matrix must be square");
        return m;
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(e.what());
    }
}

} // namespace pentalab
