// Batch front-end: reads a JSON config, runs one command, emits CSV/JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fingap/covering.hpp"
#include "fingap/green.hpp"
#include "fingap/herglotz.hpp"
#include "fingap/jost.hpp"
#include "fingap/theta.hpp"
#include "fingap/verify.hpp"

using namespace fingap;
using nlohmann::json;

namespace {

struct RunConfig {
    GapSet set{std::vector<double>{-2.0, 2.0}};
    std::string command;
    DirichletData dirichlet;
    bool haveDirichlet = false;
    int N = 10;
    Tolerances tol;
    std::string output = "out";
    std::uint64_t seed = 0;
    int maxWordLen = 16;
};

RunConfig parseConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("config parse error: ") + ex.what());
    }
    RunConfig cfg;
    if (!j.contains("bands") || !j["bands"].is_array() || j["bands"].empty())
        throw ConfigError("config: \"bands\" must be a nonempty array of [lo,hi] pairs");
    std::vector<std::pair<double, double>> bands;
    for (const auto& b : j["bands"]) {
        if (!b.is_array() || b.size() != 2) throw ConfigError("config: malformed band");
        bands.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
    cfg.set = GapSet::fromBands(bands);
    cfg.command = j.value("command", "analyze");
    if (j.contains("dirichlet")) {
        cfg.haveDirichlet = true;
        for (const auto& d : j["dirichlet"]) {
            if (!d.is_array() || d.size() != 2)
                throw ConfigError("config: malformed dirichlet entry");
            cfg.dirichlet.push_back(
                {d[0].get<double>(), static_cast<int>(d[1].get<double>())});
        }
        if (static_cast<int>(cfg.dirichlet.size()) != cfg.set.ell())
            throw ConfigError("config: dirichlet length must equal the gap count");
    }
    cfg.N = j.value("N", 10);
    if (j.contains("tolerances")) {
        cfg.tol.root = j["tolerances"].value("root", cfg.tol.root);
        cfg.tol.quad = j["tolerances"].value("quad", cfg.tol.quad);
    }
    cfg.output = j.value("output", cfg.output);
    return cfg;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json jnum(double v) { return json(v); }

void writeFile(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << body;
}

DirichletData defaultDirichlet(const RunConfig& cfg) {
    if (cfg.haveDirichlet) return cfg.dirichlet;
    return basePoint(cfg.set);
}

int cmdAnalyze(const RunConfig& cfg) {
    Potential pot(cfg.set, cfg.tol);
    auto d = pot.data();
    json out;
    out["capacity"] = jnum(d.capacity);
    out["craigZeros"] = d.craigZeros;
    out["harmonicMeasures"] = d.harmonicMeasures;
    out["bandCumulative"] = d.bandCumulative;
    writeFile(cfg.output + "_analyze.json", out.dump(2) + "\n");
    return 0;
}

int cmdTorus(const RunConfig& cfg) {
    auto y = defaultDirichlet(cfg);
    auto c = orbitJacobi(cfg.set, y, cfg.N);
    std::string csv = "n,a_n,b_n\n";
    for (int n = 1; n <= cfg.N; ++n)
        csv += std::to_string(n) + "," + fmt(c.aAt(n)) + "," + fmt(c.bAt(n)) + "\n";
    writeFile(cfg.output + "_torus.csv", csv);

    auto rep = HerglotzRep::build(cfg.set, y);
    json meas;
    meas["samples"] = json::array();
    for (int j = 1; j <= cfg.set.numBands(); ++j) {
        for (int i = 1; i < 24; ++i) {
            double x = cfg.set.alpha(j) +
                       (cfg.set.beta(j) - cfg.set.alpha(j)) * i / 24.0;
            meas["samples"].push_back({{"x", jnum(x)}, {"w", jnum(rep.weight(x))}});
        }
    }
    meas["pointMasses"] = json::array();
    for (auto& pm : rep.pointMasses())
        meas["pointMasses"].push_back(
            {{"location", jnum(pm.first)}, {"mass", jnum(pm.second)}});
    writeFile(cfg.output + "_measure.json", meas.dump(2) + "\n");
    return 0;
}

int cmdCover(const RunConfig& cfg) {
    CalibrationOptions opt;
    opt.maxWordLen = cfg.maxWordLen;
    opt.numTol = cfg.tol;
    auto map = CoveringMap::calibrate(cfg.set, opt);
    json out;
    out["xInfinity"] = jnum(map.xInfinity());
    out["capacity"] = jnum(map.potential().capacity());
    out["circles"] = json::array();
    for (const auto& c : map.group().upperCircles())
        out["circles"].push_back({{"center", {jnum(c.center.real()), jnum(c.center.imag())}},
                                  {"radius", jnum(c.radius)},
                                  {"gap", c.gapIndex}});
    out["characters"] = json::array();
    for (auto v : map.characterOfB().values)
        out["characters"].push_back({jnum(v.real()), jnum(v.imag())});
    out["samples"] = json::array();
    for (int i = 1; i <= 24; ++i) {
        cplx z = std::polar(0.035 * i, 2.0 * kPi * i / 24.0 + 0.37);
        if (!map.group().inFundamental(z)) continue;
        cplx x = map.evalX(z);
        out["samples"].push_back({{"z", {jnum(z.real()), jnum(z.imag())}},
                                  {"x", {jnum(x.real()), jnum(x.imag())}}});
    }
    writeFile(cfg.output + "_cover.json", out.dump(2) + "\n");
    return 0;
}

int cmdJost(const RunConfig& cfg) {
    CalibrationOptions opt;
    opt.maxWordLen = cfg.maxWordLen;
    opt.numTol = cfg.tol;
    auto map = CoveringMap::calibrate(cfg.set, opt);
    auto y = defaultDirichlet(cfg);
    JostSolutionSeq seq(map, y);
    json out;
    out["uGrid"] = json::array();
    JostFunction u(map, y);
    for (int i = 1; i <= 16; ++i) {
        cplx z = std::polar(0.05 * i, 0.4 + 0.11 * i);
        if (!map.group().inFundamental(z)) continue;
        cplx v = u.eval(z);
        out["uGrid"].push_back({{"z", {jnum(z.real()), jnum(z.imag())}},
                                {"u", {jnum(v.real()), jnum(v.imag())}}});
    }
    out["solutions"] = json::array();
    cplx z0(0.31, 0.17);
    double worstRec = 0.0;
    cplx x0 = map.evalX(z0);
    for (int n = -3; n <= std::max(3, cfg.N); ++n) {
        cplx v = seq.u(n, z0);
        out["solutions"].push_back({{"n", n},
                                    {"u_n", {jnum(v.real()), jnum(v.imag())}},
                                    {"a_n", jnum(seq.a(n))},
                                    {"b_n", jnum(seq.b(n))}});
        if (n > -3 && n < std::max(3, cfg.N)) {
            cplx r = seq.a(n) * seq.u(n + 1, z0) + (seq.b(n) - x0) * seq.u(n, z0) +
                     seq.a(n - 1) * seq.u(n - 1, z0);
            worstRec = std::max(worstRec, std::abs(r));
        }
    }
    out["recurrenceResidual"] = jnum(worstRec);
    writeFile(cfg.output + "_jost.json", out.dump(2) + "\n");
    return 0;
}

int cmdGreen(const RunConfig& cfg) {
    CalibrationOptions opt;
    opt.maxWordLen = cfg.maxWordLen;
    opt.numTol = cfg.tol;
    auto map = CoveringMap::calibrate(cfg.set, opt);
    auto y = defaultDirichlet(cfg);
    GreenEvaluator ge(map, y);
    const GapSet& e = cfg.set;
    std::vector<double> xs{e.hullHi() + 0.5, e.hullHi() + 2.0, e.hullLo() - 0.5};
    for (int j = 1; j <= e.ell(); ++j)
        xs.push_back(e.gapLo(j) + 0.37 * (e.gapHi(j) - e.gapLo(j)));
    json out = json::array();
    for (double x : xs) {
        auto p = makeOffSpectrumPoint(map, x);
        double G = map.potential().green(cplx(x, 0.0));
        double dist = e.distToSet(x);
        for (auto [n, m] : {std::pair{0, 0}, std::pair{0, 2}, std::pair{-1, 3}}) {
            cplx v = ge.wholeLine(p, n, m);
            double bound = std::exp(-G * std::abs(n - m)) / std::sqrt(dist);
            out.push_back({{"x", jnum(x)},
                           {"n", n},
                           {"m", m},
                           {"value", {jnum(v.real()), jnum(v.imag())}},
                           {"boundSlack", jnum(3.0 * bound - std::abs(v))}});
        }
    }
    writeFile(cfg.output + "_green.json", json(out).dump(2) + "\n");
    return 0;
}

int cmdVerify(const RunConfig& cfg) {
    auto rs = runVerifySuite(cfg.set, cfg.seed, cfg.maxWordLen);
    json out = json::array();
    bool all = true;
    for (const auto& r : rs) {
        out.push_back({{"check", r.check},
                       {"status", r.pass ? "pass" : "fail"},
                       {"maxResidual", jnum(r.maxResidual)},
                       {"budget", jnum(r.budget)}});
        if (!r.pass) all = false;
        std::printf("%-36s %s\n", r.check.c_str(), r.pass ? "pass" : "FAIL");
    }
    writeFile(cfg.output + "_verify.json", json(out).dump(2) + "\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite gap set toolbox"};
    std::string configPath;
    std::string outPrefix;
    std::uint64_t seed = 0;
    int maxWordLen = 16;
    app.add_option("--config", configPath, "JSON config path")->required();
    app.add_option("--out", outPrefix, "output path prefix (overrides config)");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--max-word-len", maxWordLen, "group enumeration depth cap");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parseConfig(configPath);
        if (!outPrefix.empty()) cfg.output = outPrefix;
        cfg.seed = seed;
        cfg.maxWordLen = maxWordLen;
        if (cfg.command == "analyze") return cmdAnalyze(cfg);
        if (cfg.command == "torus") return cmdTorus(cfg);
        if (cfg.command == "cover") return cmdCover(cfg);
        if (cfg.command == "jost") return cmdJost(cfg);
        if (cfg.command == "green") return cmdGreen(cfg);
        if (cfg.command == "verify") return cmdVerify(cfg);
        throw ConfigError("unknown command: " + cfg.command);
    } catch (const NumericsError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
