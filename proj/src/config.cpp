#include "collab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace collab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

double parse_number(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line) + ": field '" + key +
                                 "': not a number: " + v);
    }
}

std::uint64_t parse_uint(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return u;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line) + ": field '" + key +
                                 "': not a nonnegative integer: " + v);
    }
}

std::string fmt(double d) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

ClaimLaw law_from(const std::string& kind, double rate, const std::string& file) {
    if (kind == "exponential") return ClaimLaw::exponential(rate);
    if (kind == "numeric") {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("config: cannot open claim CDF file: " + file);
        std::vector<double> s, c;
        double a, b;
        char comma;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            if (ls >> a >> comma >> b) {
                s.push_back(a);
                c.push_back(b);
            }
        }
        return ClaimLaw::numeric(std::move(s), std::move(c));
    }
    throw std::runtime_error("config: unknown claim kind: " + kind);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(ln) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(ln) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = unquote(trim(line.substr(eq + 1)));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "model.p1") cfg.p1 = parse_number(val, ln, full);
        else if (full == "model.p2") cfg.p2 = parse_number(val, ln, full);
        else if (full == "model.lambda1") cfg.lambda1 = parse_number(val, ln, full);
        else if (full == "model.lambda2") cfg.lambda2 = parse_number(val, ln, full);
        else if (full == "model.claim1_kind") cfg.claim1_kind = val;
        else if (full == "model.claim2_kind") cfg.claim2_kind = val;
        else if (full == "model.claim1_rate") cfg.claim1_rate = parse_number(val, ln, full);
        else if (full == "model.claim2_rate") cfg.claim2_rate = parse_number(val, ln, full);
        else if (full == "model.claim1_file") cfg.claim1_file = val;
        else if (full == "model.claim2_file") cfg.claim2_file = val;
        else if (full == "model.delta") cfg.delta = parse_number(val, ln, full);
        else if (full == "model.a1") cfg.a1 = parse_number(val, ln, full);
        else if (full == "grid.step") cfg.step = parse_number(val, ln, full);
        else if (full == "grid.x_max") cfg.x_max = parse_number(val, ln, full);
        else if (full == "grid.y_max") cfg.y_max = parse_number(val, ln, full);
        else if (full == "iterate.iterations") cfg.iterations = parse_uint(val, ln, full);
        else if (full == "iterate.fixed_point_tol")
            cfg.fixed_point_tol = parse_number(val, ln, full);
        else if (full == "iterate.v0_convention") cfg.v0_convention = val;
        else if (full == "simulate.paths") cfg.paths = parse_uint(val, ln, full);
        else if (full == "simulate.seed") cfg.seed = parse_uint(val, ln, full);
        else
            throw std::runtime_error("config line " + std::to_string(ln) + ": unknown field '" +
                                     full + "'");
    }
    if (cfg.v0_convention != "payoff" && cfg.v0_convention != "paper")
        throw std::runtime_error("config: v0_convention must be 'payoff' or 'paper'");
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    std::ostringstream o;
    o << "[model]\n";
    o << "p1 = " << fmt(p1) << "\n";
    o << "p2 = " << fmt(p2) << "\n";
    o << "lambda1 = " << fmt(lambda1) << "\n";
    o << "lambda2 = " << fmt(lambda2) << "\n";
    o << "claim1_kind = \"" << claim1_kind << "\"\n";
    o << "claim1_rate = " << fmt(claim1_rate) << "\n";
    if (!claim1_file.empty()) o << "claim1_file = \"" << claim1_file << "\"\n";
    o << "claim2_kind = \"" << claim2_kind << "\"\n";
    o << "claim2_rate = " << fmt(claim2_rate) << "\n";
    if (!claim2_file.empty()) o << "claim2_file = \"" << claim2_file << "\"\n";
    o << "delta = " << fmt(delta) << "\n";
    o << "a1 = " << fmt(a1) << "\n";
    o << "[grid]\n";
    o << "step = " << fmt(step) << "\n";
    o << "x_max = " << fmt(x_max) << "\n";
    o << "y_max = " << fmt(y_max) << "\n";
    o << "[iterate]\n";
    o << "iterations = " << iterations << "\n";
    o << "fixed_point_tol = " << fmt(fixed_point_tol) << "\n";
    o << "v0_convention = \"" << v0_convention << "\"\n";
    o << "[simulate]\n";
    o << "paths = " << paths << "\n";
    o << "seed = " << seed << "\n";
    return o.str();
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t RunConfig::hash() const { return fnv1a(serialize()); }

ModelParams RunConfig::make_params() const {
    ModelParams p;
    p.p1 = p1;
    p.p2 = p2;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.law1 = law_from(claim1_kind, claim1_rate, claim1_file);
    p.law2 = law_from(claim2_kind, claim2_rate, claim2_file);
    p.delta = delta;
    p.a1 = a1;
    return make_validated(p);
}

Grid2D RunConfig::make_grid() const {
    Grid2D g;
    g.step = step;
    g.nx = static_cast<std::size_t>(x_max / step + 0.5) + 1;
    g.ny = static_cast<std::size_t>(y_max / step + 0.5) + 1;
    return g;
}

V0Convention RunConfig::make_convention() const {
    return v0_convention == "paper" ? V0Convention::paper_display : V0Convention::payoff;
}

}  // namespace collab
