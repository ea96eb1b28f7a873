#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "optrec/bounds.hpp"
#include "optrec/domain.hpp"
#include "optrec/geometry.hpp"
#include "optrec/report.hpp"
#include "optrec/spectral.hpp"
#include "optrec/version.hpp"

namespace optrec {

using nlohmann::json;

// --- NormSpec: {"p": 2} or {"p": "inf", "weights": [...]} ---

inline json to_json(const NormSpec& n) {
    json j;
    if (n.is_inf) j["p"] = "inf";
    else j["p"] = n.p;
    if (n.weighted()) j["weights"] = n.weights;
    return j;
}

inline NormSpec norm_from_json(const json& j) {
    NormSpec n;
    if (j.contains("p")) {
        if (j["p"].is_string()) {
            if (j["p"] != "inf") throw std::invalid_argument("norm: p must be a number or \"inf\"");
            n = NormSpec::linf();
        } else {
            n = NormSpec::lp(j["p"].get<double>());
        }
    }
    if (j.contains("weights")) n = n.with_weights(j["weights"].get<std::vector<double>>());
    return n;
}

// --- Domain ---

inline json to_json(const Domain& D) {
    json j;
    switch (D.kind()) {
    case Domain::Kind::Box:
        j["kind"] = "box";
        j["lo"] = D.as_box().lo;
        j["hi"] = D.as_box().hi;
        break;
    case Domain::Kind::BallUnion: {
        const auto& bu = D.as_ball_union();
        j["kind"] = "ball_union";
        std::vector<std::vector<double>> cs;
        for (std::size_t i = 0; i < bu.centers.size(); ++i) {
            auto p = bu.centers.point(i);
            cs.emplace_back(p.begin(), p.end());
        }
        j["centers"] = cs;
        j["radii"] = bu.radii;
        j["norm"] = to_json(bu.norm);
        j["disjoint"] = bu.disjoint;
        break;
    }
    case Domain::Kind::Mask: {
        const auto& m = D.as_mask();
        j["kind"] = "mask";
        j["builtin"] = m.name;
        j["bbox"] = {{"lo", m.bbox.lo}, {"hi", m.bbox.hi}};
        break;
    }
    }
    return j;
}

inline Domain domain_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "box")
        return Domain::box(j.at("lo").get<std::vector<double>>(),
                           j.at("hi").get<std::vector<double>>());
    if (kind == "ball_union") {
        auto centers = j.at("centers").get<std::vector<std::vector<double>>>();
        if (centers.empty()) throw std::invalid_argument("domain: ball_union needs centers");
        PointSet ps(centers[0].size());
        for (auto& c : centers) ps.push_back(c);
        NormSpec norm = j.contains("norm") ? norm_from_json(j["norm"]) : NormSpec::lp(2.0);
        bool disjoint = j.value("disjoint", false);
        return Domain::ball_union(std::move(ps), j.at("radii").get<std::vector<double>>(),
                                  std::move(norm), disjoint);
    }
    if (kind == "mask") {
        // masks come from the named builtin corpus; arbitrary predicates only
        // through the library API
        Domain d = Domain::builtin_mask(j.at("builtin").get<std::string>());
        if (j.contains("bbox")) {
            auto lo = j["bbox"].at("lo").get<std::vector<double>>();
            auto hi = j["bbox"].at("hi").get<std::vector<double>>();
            const Box& b = d.as_mask().bbox;
            if (lo != b.lo || hi != b.hi)
                throw std::invalid_argument("domain: bbox does not match the builtin mask");
        }
        return d;
    }
    throw std::invalid_argument("domain: unknown kind '" + kind + "'");
}

inline Domain load_domain(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("load_domain: cannot open " + path);
    json j;
    f >> j;
    return domain_from_json(j);
}

// --- reports ---

inline json to_json(const ErrorReport& r) {
    json j;
    j["value"] = r.value;
    switch (r.kind) {
    case ErrorReport::Kind::CertifiedInterval: j["kind"] = "certified-interval"; break;
    case ErrorReport::Kind::MonteCarlo: j["kind"] = "monte-carlo"; break;
    case ErrorReport::Kind::Exact: j["kind"] = "exact"; break;
    }
    auto finite_or_null = [](double v) -> json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    j["lo"] = finite_or_null(r.lo);
    j["hi"] = finite_or_null(r.hi);
    j["stderr"] = r.stderr_;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    if (r.lower_estimate_only) j["lower_estimate_only"] = true;
    if (r.infinite) j["infinite"] = true;
    if (!r.converged) j["converged"] = false;
    if (!r.note.empty()) j["note"] = r.note;
    j["tool_version"] = kVersion;
    return j;
}

inline json to_json(const VolumeEstimate& v) {
    json j;
    j["value"] = v.value;
    j["method"] = v.method == VolumeEstimate::Method::Exact ? "exact" : "monte-carlo";
    j["samples"] = v.samples;
    j["stderr"] = v.stderr_;
    j["seed"] = v.seed;
    j["tool_version"] = kVersion;
    return j;
}

inline json to_json(const BoundReport& b) {
    json j;
    j["quantity"] = b.quantity;
    j["formula"] = b.formula_id;
    j["lo"] = b.lo;
    if (b.upper_finite) j["hi"] = b.hi;
    else j["hi"] = nullptr;
    if (b.is_point()) j["value"] = b.lo;
    j["asymptotic"] = b.asymptotic;
    j["valid_all_n"] = b.valid_all_n;
    if (b.asymptotic) j["covering_constant_logs"] = "natural"; // Rogers bracket convention
    if (b.warning) j["warning"] = true;
    j["inputs"] = {{"n", b.n}, {"d", b.d}, {"norm", b.norm}, {"vol", b.vol}};
    j["tool_version"] = kVersion;
    return j;
}

inline json to_json(const CurseReport& c) {
    json j;
    j["coefficient"] = c.coefficient;
    j["coefficient_asymptotic"] = c.coefficient_asymptotic;
    j["min_n"] = c.min_n;
    j["vacuous"] = c.vacuous;
    j["inputs"] = {{"eps", c.eps}, {"d", c.d}, {"p", c.p}};
    j["formula"] = "curse";
    j["tool_version"] = kVersion;
    return j;
}

inline json to_json(const Spectrum& s) {
    json j;
    j["eigenvalues"] = s.eigenvalues;
    j["bc"] = s.bc == Spectrum::BC::Dirichlet ? "dirichlet" : "neumann";
    j["h"] = s.h;
    j["k"] = s.k;
    j["d"] = s.d;
    j["volume"] = s.domain_volume;
    j["max_residual"] = s.max_residual;
    if (!s.note.empty()) j["note"] = s.note;
    j["tool_version"] = kVersion;
    return j;
}

inline Spectrum spectrum_from_json(const json& j) {
    Spectrum s;
    s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    s.bc = j.at("bc") == "dirichlet" ? Spectrum::BC::Dirichlet : Spectrum::BC::Neumann;
    s.h = j.at("h").get<double>();
    s.k = j.at("k").get<std::size_t>();
    s.d = j.at("d").get<std::size_t>();
    s.domain_volume = j.at("volume").get<double>();
    s.max_residual = j.value("max_residual", 0.0);
    return s;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_json_file: cannot open " + path);
    f << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_json_file: cannot open " + path);
    json j;
    f >> j;
    return j;
}

} // namespace optrec
