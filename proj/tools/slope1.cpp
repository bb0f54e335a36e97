// tools/slope1.cpp
// SPDX-License-Identifier: Apache-2.0
//
// slope1 reduce   --p P --k K --ap A [--precision N] [--ramification] [--llc]
// slope1 verify   {lemmas|structure|witnesses} --p P[,P..] [--r LO..HI] [--rmax R] [--case W]
// slope1 sweep    --p P (--k K | --r R) --grid M [--out FILE]
//
// Every command prints JSON (one object per line) on stdout.  Exit codes:
// 0 ok, 1 verification failure, 2 insufficient precision, 3 hypothesis
// violation or bad arguments.  With --cache FILE or SLOPE1_CACHE set, a
// finished command is appended to that JSON-lines file and a later run
// with the same command and parameters replays it verbatim.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "slope1/report.hpp"

using namespace slope1;

namespace {

constexpr const char* kEngineVersion = "slope1 1.0.0";

struct Outcome {
    std::string out;   // stdout
    std::string file;  // contents for --out, if any
    int code = 0;
};

std::vector<u64> parse_primes(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 3) throw std::invalid_argument(tok);
            out.push_back(static_cast<u64>(v));
        } catch (const std::exception&) {
            throw HypothesisError("bad prime list: " + s);
        }
    }
    if (out.empty()) throw HypothesisError("empty prime list");
    return out;
}

// "LO..HI" or a single value.
std::pair<int, int> parse_range(const std::string& s) {
    try {
        auto dots = s.find("..");
        if (dots == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw HypothesisError("bad range: " + s);
    }
}

std::string line(const Json& j) { return j.dump() + "\n"; }

Json summary(const std::string& suite, std::size_t items, std::size_t failures) {
    return Json{{"suite", suite}, {"summary", true}, {"items", items}, {"failures", failures}, {"pass", failures == 0}};
}

// ---- commands ----

struct ReduceArgs {
    u64 p = 0;
    int k = 0;
    std::string ap;
    int precision = 0;
    bool ramification = false, llc = false;
    std::string format = "json";
};

Outcome run_reduce(const ReduceArgs& a) {
    auto c = CrystallineParams::make(a.p, a.k, a.ap, a.precision);
    Json j = reduce_json(c, a.ramification, a.llc);
    if (a.format == "json") return {line(j), "", 0};
    std::ostringstream os;
    ReductionResult res = reduce_slope_one(c);
    os << "p = " << c.p << ", k = " << c.k << ", r = " << c.r << ", b = " << c.b << ", a_p = " << c.ap_text << "\n";
    os << "reduction: " << res.str() << "\n";
    if (a.ramification) {
        auto rc = classify_ramification(c, res);
        os << "ramification: " << rc.str() << (rc.note.empty() ? "" : " (" + rc.note + ")") << "\n";
    }
    if (a.llc) {
        os << "llc:";
        for (const auto& f : llc(res, c.p)) os << " " << f.str();
        os << "\n";
    }
    os << "precision used: " << needed_precision(c) << "\n";
    return {os.str(), "", 0};
}

struct VerifyArgs {
    std::string suite;
    std::string primes = "5,7,11";
    std::string range;
    int rmax = 0;
    std::string case_id;
    std::string ap;
    bool all_items = false;
};

Outcome run_verify(const VerifyArgs& a) {
    std::vector<u64> primes = parse_primes(a.primes);
    std::ostringstream os;
    std::size_t items = 0, failures = 0;
    auto emit = [&](const Json& j, bool ok) {
        ++items;
        if (!ok) ++failures;
        if (!ok || a.all_items) os << line(j);
    };
    for (u64 p : primes) {
        if (!is_prime(p)) throw HypothesisError(std::to_string(p) + " is not prime");
        int P = static_cast<int>(p);
        auto [lo, hi] = a.range.empty() ? std::pair<int, int>{2 * P, 6 * P} : parse_range(a.range);
        if (a.suite == "lemmas") {
            i64 rmax = a.rmax > 0 ? a.rmax : (a.range.empty() ? 60 * P : hi);
            for (const auto& rep : lemma_suite(p, rmax)) emit(to_json(rep), rep.pass);
        } else if (a.suite == "structure") {
            for (int r = lo; r <= hi; ++r)
                for (const auto& name : structural_lemmas_for(p, r)) {
                    StructureReport rep;
                    try {
                        rep = verify_structural_lemma(name, p, r);
                    } catch (const std::exception& e) {
                        rep = {name, p, r, false, e.what()};
                    }
                    emit(to_json(rep), rep.pass);
                }
        } else if (a.suite == "witnesses") {
            if (!a.case_id.empty()) {
                const auto& ids = witness_cases();
                if (std::find(ids.begin(), ids.end(), a.case_id) == ids.end())
                    throw HypothesisError("unknown witness case " + a.case_id);
            }
            std::vector<std::string> aps;
            if (!a.ap.empty())
                aps.push_back(a.ap);
            else
                for (u64 u = 1; u < p; ++u) aps.push_back(std::to_string(u * p));
            for (int r = lo; r <= hi; ++r)
                for (const auto& ap_text : aps) {
                    Padic ap = parse_ap(ap_text, p).value;
                    if (r < 2 * P || ap.is_zero() || ap.valuation() != 1) continue;
                    for (const auto& id : applicable_witnesses(p, r, ap)) {
                        if (!a.case_id.empty() && id != a.case_id) continue;
                        WitnessReport rep = verify_witness(id, p, r, ap);
                        emit(to_json(rep), rep.integral && rep.matches_claim);
                    }
                }
        } else {
            throw HypothesisError("unknown suite " + a.suite);
        }
    }
    if (a.suite == "witnesses" && items == 0) throw HypothesisError("no witness case applies on the requested grid");
    os << line(summary(a.suite, items, failures));
    return {os.str(), "", failures == 0 ? 0 : 1};
}

struct SweepArgs {
    u64 p = 0;
    int k = 0, r = 0, grid = 1, threads = 0;
    std::string out;
};

Outcome run_sweep(const SweepArgs& a) {
    if (a.p < 5 || !is_prime(a.p)) throw HypothesisError("p must be a prime >= 5");
    int k = a.k > 0 ? a.k : a.r + 2;
    if (k <= 2) throw HypothesisError("sweep needs --k or --r");
    if (a.grid < 0 || a.grid > 6) throw HypothesisError("--grid must lie in [0, 6]");
    // a_p/p runs over the units mod p^grid; grid 0 is the empty grid.
    std::vector<u64> units;
    if (a.grid > 0)
        for (u64 u = 1, m = Padic::ppow(a.p, a.grid); u < m; ++u)
            if (u % a.p != 0) units.push_back(u);
    std::vector<std::string> rows(units.size());
    std::vector<std::string> errors(units.size());
    unsigned n = a.threads > 0 ? static_cast<unsigned>(a.threads) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(units.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < units.size(); i += n) {
                try {
                    auto c = CrystallineParams::make(a.p, k, std::to_string(units[i] * a.p));
                    rows[i] = line(reduce_json(c, true, true));
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw HypothesisError(e);
    std::string table;
    for (const auto& r : rows) table += r;
    Json s{{"command", "sweep"}, {"p", a.p}, {"k", k}, {"grid", a.grid}, {"rows", rows.size()}};
    if (a.out.empty()) return {table + line(s), "", 0};
    s["out"] = a.out;
    return {line(s), table, 0};
}

// ---- cache ----

std::string cache_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("SLOPE1_CACHE");
    return env ? env : "";
}

std::optional<Json> cache_lookup(const std::string& path, const std::string& key) {
    std::ifstream in(path);
    std::optional<Json> hit;
    std::string s;
    while (std::getline(in, s)) {
        if (s.empty()) continue;
        Json j = Json::parse(s, nullptr, false);
        if (!j.is_discarded() && j.value("key", "") == key) hit = j;  // last write wins
    }
    return hit;
}

void cache_append(const std::string& path, const std::string& key, const std::string& command, const Json& params,
                  const Outcome& o) {
    auto now = std::chrono::system_clock::now();
    long long ts = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    Json rec{{"key", key},      {"command", command}, {"params", params}, {"stdout", o.out},
             {"file", o.file},  {"exit", o.code},     {"timestamp", ts},  {"engine_version", kEngineVersion}};
    std::ofstream(path, std::ios::app) << rec.dump() << "\n";
}

int finish(const Outcome& o, const std::string& out_path) {
    std::cout << o.out << std::flush;
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return 3;
        }
        f << o.file;
    }
    return o.code;
}

int fail(const std::string& kind, const std::string& msg, int code, std::optional<int> needed = std::nullopt) {
    Json j{{"error", kind}, {"message", msg}};
    if (needed) j["needed_precision"] = *needed;
    std::cout << line(j);
    std::cerr << "slope1: " << msg << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mod p reductions of slope one crystalline representations"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string cache_flag;
    app.add_option("--cache", cache_flag, "append-only JSON-lines result cache (default: $SLOPE1_CACHE)");

    ReduceArgs ra;
    auto* reduce = app.add_subcommand("reduce", "reduction of V_{k,a_p} for v(a_p) = 1");
    reduce->add_option("--p", ra.p, "prime >= 5")->required();
    reduce->add_option("--k", ra.k, "weight >= 4")->required();
    reduce->add_option("--ap", ra.ap, "a_p as num/den or v:d0,d1,...")->required()->allow_extra_args(false);
    reduce->add_option("--precision", ra.precision, "truncate a_p to this absolute precision");
    reduce->add_flag("--ramification", ra.ramification, "add the extension type");
    reduce->add_flag("--llc", ra.llc, "add the mod p Local Langlands descriptor");
    reduce->add_option("--format", ra.format, "json or text")->check(CLI::IsMember({"json", "text"}));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", va.suite, "lemmas, structure or witnesses")
        ->required()
        ->check(CLI::IsMember({"lemmas", "structure", "witnesses"}));
    verify->add_option("--p", va.primes, "comma-separated primes");
    verify->add_option("--r", va.range, "r or LO..HI (default 2p..6p)");
    verify->add_option("--rmax", va.rmax, "largest r for the lemma suite (default 60p)");
    verify->add_option("--case", va.case_id, "witness case W1..W11");
    verify->add_option("--ap", va.ap, "a_p for witness replays (default p, 2p, ..., (p-1)p)");
    verify->add_flag("--all-items", va.all_items, "print passing items too");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "tabulate reductions over a_p/p in the units mod p^grid");
    sweep->add_option("--p", sa.p, "prime >= 5")->required();
    sweep->add_option("--k", sa.k, "weight");
    sweep->add_option("--r", sa.r, "r = k - 2");
    sweep->add_option("--grid", sa.grid, "m: a_p/p over the units mod p^m (0 = empty)");
    sweep->add_option("--out", sa.out, "write the table here instead of stdout");
    sweep->add_option("--threads", sa.threads, "worker threads (default: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    std::string command;
    Json params;
    if (*reduce) {
        command = "reduce";
        params = {{"p", ra.p}, {"k", ra.k}, {"ap", ra.ap}, {"precision", ra.precision},
                  {"ramification", ra.ramification}, {"llc", ra.llc}, {"format", ra.format}};
    } else if (*verify) {
        command = "verify";
        params = {{"suite", va.suite}, {"p", va.primes}, {"r", va.range}, {"rmax", va.rmax},
                  {"case", va.case_id}, {"ap", va.ap}, {"all_items", va.all_items}};
    } else {
        command = "sweep";
        params = {{"p", sa.p}, {"k", sa.k}, {"r", sa.r}, {"grid", sa.grid}, {"out", sa.out}};
    }
    std::string key = command + " " + params.dump();
    std::string out_path = *sweep ? sa.out : "";

    std::string cache = cache_path(cache_flag);
    if (!cache.empty())
        if (auto hit = cache_lookup(cache, key))
            return finish({hit->value("stdout", ""), hit->value("file", ""), hit->value("exit", 0)}, out_path);

    try {
        Outcome o = *reduce ? run_reduce(ra) : *verify ? run_verify(va) : run_sweep(sa);
        if (!cache.empty()) cache_append(cache, key, command, params, o);
        return finish(o, out_path);
    } catch (const PrecisionError& e) {
        return fail("insufficient_precision", e.what(), 2, e.needed());
    } catch (const HypothesisError& e) {
        return fail("hypothesis", e.what(), 3);
    } catch (const StructureError& e) {
        return fail("structure", e.what(), 1);
    }
}
