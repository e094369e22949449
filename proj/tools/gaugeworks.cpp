// gaugeworks: exact-arithmetic constructions and certificates for balanced
// Cantor systems, incomparable gauge schedules, digit-expansion sets and
// discrete convolution demonstrations.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 malformed input.

#include "gaugeworks/json_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace gaugeworks;

namespace {

struct ReportBuilder {
    Json report;
    bool any_fail = false;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit ReportBuilder(const std::string& command) {
        report["command"] = command;
        report["config"] = Json::object();
        report["checks"] = Json::array();
    }

    void config(const std::string& key, const Json& value) { report["config"][key] = value; }

    void add(const Certificate& cert) {
        report["checks"].push_back(certificate_json(cert));
        if (!cert.pass) any_fail = true;
    }

    void add(const BoundCertificate& cert) {
        report["checks"].push_back(bound_certificate_json(cert));
        if (!cert.pass) any_fail = true;
    }

    int finish(const std::string& report_path) {
        const auto dt = std::chrono::steady_clock::now() - t0;
        report["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::microseconds>(dt).count() / 1000.0;
        if (!report_path.empty()) save_json(report, report_path);
        for (const auto& c : report["checks"]) {
            const bool ok = c.contains("pass") ? c["pass"].get<bool>() : true;
            const std::string name = c.contains("name") ? c["name"].get<std::string>()
                                                        : c.value("check", std::string("check"));
            std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        }
        return any_fail ? 1 : 0;
    }
};

std::vector<BigInt> parse_int_list(const std::string& csv) {
    std::vector<BigInt> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(parse_bigint(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ParseError("empty integer list: " + csv);
    return out;
}

std::vector<Rational> parse_rat_list(const std::string& csv) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(parse_rational(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ParseError("empty rational list: " + csv);
    return out;
}

// caps accept "2^N" or a decimal literal
BigInt parse_cap(const std::string& s) {
    if (s.rfind("2^", 0) == 0) return BigInt(1) << std::stoul(s.substr(2));
    return parse_bigint(s);
}

OpenSetModel load_model(const std::string& path, int depth) {
    if (path.empty()) return all_unit_model(depth);
    OpenSetModel m = model_from(load_json(path));
    if (static_cast<int>(m.levels.size()) < depth)
        throw ParseError("model has fewer levels than the requested depth");
    return m;
}

Json classify_json(const ClassifyReport& rep) {
    Json pts = Json::array();
    for (const auto& p : rep.points)
        pts.push_back(Json{{"point", rational_json(p.point)}, {"class", p.in_b1 ? "B1" : "B2"}});
    return Json{{"horizon", rep.horizon}, {"points", pts}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaugeworks: certified constructions for translation-invariant measure demos"};
    app.require_subcommand(1);
    std::function<int()> runner;

    // ---- construct ----------------------------------------------------------
    auto* construct = app.add_subcommand("construct", "build systems and schedules");
    construct->require_subcommand(1);

    {
        auto* cmd = construct->add_subcommand("balanced", "balanced Cantor system");
        auto model_path = std::make_shared<std::string>();
        auto schedule = std::make_shared<std::string>("auto");
        auto m_start = std::make_shared<std::string>("4");
        auto depth = std::make_shared<int>(2);
        auto out = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        auto cap_m = std::make_shared<std::string>("2^64");
        cmd->add_option("--model", *model_path, "model JSON (default: all-(0,1))");
        cmd->add_option("--schedule", *schedule, "comma-separated m values, or 'auto'");
        cmd->add_option("--m-start", *m_start, "starting m for auto doubling");
        cmd->add_option("--depth", *depth, "levels to build")->required();
        cmd->add_option("--out", *out, "output system JSON");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->add_option("--cap-m", *cap_m, "doubling cap (auto mode)");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("construct balanced");
                rb.config("model", *model_path);
                rb.config("schedule", *schedule);
                rb.config("depth", *depth);
                const OpenSetModel model = load_model(*model_path, *depth);
                LevelSystem sys;
                if (*schedule == "auto")
                    sys = build_system_auto(model, parse_bigint(*m_start), *depth,
                                            parse_cap(*cap_m));
                else
                    sys = build_system(model, parse_int_list(*schedule), *depth);
                rb.add(verify_structure(sys));
                rb.add(check_ratio_monotone(natural_gauge(sys)));
                if (!out->empty()) save_json(system_json(sys), *out);
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = construct->add_subcommand("incomparable", "interleaved two-gauge schedule");
        auto model_path = std::make_shared<std::string>();
        auto cover_path = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(2);
        auto out = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        auto cap_m = std::make_shared<std::string>("2^64");
        auto m_start = std::make_shared<std::string>("4");
        cmd->add_option("--model", *model_path, "model JSON (default: all-(0,1))");
        cmd->add_option("--cover", *cover_path, "null cover JSON")->required();
        cmd->add_option("--depth", *depth, "levels per system")->required();
        cmd->add_option("--out", *out, "output schedule JSON");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->add_option("--cap-m", *cap_m, "doubling cap, e.g. 2^512");
        cmd->add_option("--m-start", *m_start, "starting m for system 1");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("construct incomparable");
                rb.config("model", *model_path);
                rb.config("cover", *cover_path);
                rb.config("depth", *depth);
                rb.config("cap_m", *cap_m);
                const OpenSetModel model = load_model(*model_path, *depth);
                const NullCover cover = cover_from(load_json(*cover_path));
                ScheduleOptions opts;
                opts.m_cap = parse_cap(*cap_m);
                opts.m1_start = parse_bigint(*m_start);
                const InterleavedSchedule sched = schedule_scales(model, cover, *depth, opts);
                Certificate build_cert;
                build_cert.name = "schedule_inequalities";
                build_cert.checks = sched.certificates;
                for (const auto& rec : sched.certificates)
                    if (!rec.ok) build_cert.pass = false;
                rb.add(build_cert);
                rb.add(verify_null(sched, cover));
                if (!out->empty()) save_json(schedule_json(sched), *out);
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = construct->add_subcommand("partition", "two-gauge partition driver");
        auto model_path = std::make_shared<std::string>();
        auto cover_path = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(2);
        auto report_path = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(1);
        auto random_n = std::make_shared<std::size_t>(2000);
        auto self_apply = std::make_shared<bool>(false);
        auto cap_m = std::make_shared<std::string>("2^64");
        cmd->add_option("--model", *model_path, "model JSON (default: all-(0,1))");
        cmd->add_option("--cover", *cover_path, "cover of A (default: empty)");
        cmd->add_option("--depth", *depth, "levels per system")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->add_option("--seed", *seed, "seed for the random mass-test family");
        cmd->add_option("--random", *random_n, "random test intervals per system");
        cmd->add_option("--cap-m", *cap_m, "doubling cap");
        cmd->add_flag("--self-apply", *self_apply,
                      "rerun with A set to the canonical covers of the first run");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("construct partition");
                rb.config("model", *model_path);
                rb.config("cover", *cover_path);
                rb.config("depth", *depth);
                rb.config("seed", *seed);
                rb.config("self_apply", *self_apply);
                const OpenSetModel model = load_model(*model_path, *depth);
                NullCover coverA;
                if (!cover_path->empty()) coverA = cover_from(load_json(*cover_path));
                AssembleOptions opts;
                opts.seed = *seed;
                opts.random_intervals = *random_n;
                opts.schedule.m_cap = parse_cap(*cap_m);
                AssembleResult res = assemble_partition(model, coverA, *depth, opts);
                if (*self_apply) {
                    NullCover self;
                    for (const auto& g : canonical_cover_groups(res.schedule.sys1))
                        self.groups.push_back(g);
                    for (const auto& g : canonical_cover_groups(res.schedule.sys2))
                        self.groups.push_back(g);
                    res = assemble_partition(model, self, *depth, opts);
                }
                rb.add(res.null_cert);
                rb.add(res.bracket1);
                rb.add(res.bracket2);
                rb.add(res.upper_cert);
                rb.report["renormalization"] =
                    Json::array({rational_json(res.renorm1), rational_json(res.renorm2)});
                rb.report["iterations"] = res.iterations;
                rb.report["classification"] = classify_json(res.classes);
                return rb.finish(*report_path);
            };
        });
    }

    // ---- verify -------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "re-check certificates");
    verify->require_subcommand(1);

    {
        auto* cmd = verify->add_subcommand("nested", "open-set model nesting");
        auto model_path = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--model", *model_path, "model JSON")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("verify nested");
                rb.config("model", *model_path);
                OpenSetModel model = model_from(load_json(*model_path));
                rb.add(validate_nested(model));
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = verify->add_subcommand("mass", "mass distribution bracket");
        auto system_path = std::make_shared<std::string>();
        auto gauge_path = std::make_shared<std::string>();
        auto factor = std::make_shared<std::string>("8/1");
        auto random_n = std::make_shared<std::size_t>(10000);
        auto seed = std::make_shared<std::uint64_t>(42);
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--system", *system_path, "system JSON")->required();
        cmd->add_option("--gauge", *gauge_path, "gauge JSON (default: natural gauge)");
        cmd->add_option("--factor", *factor, "mass distribution factor, e.g. 8/1");
        cmd->add_option("--random", *random_n, "seeded random test intervals");
        cmd->add_option("--seed", *seed, "random seed");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("verify mass");
                rb.config("system", *system_path);
                rb.config("factor", *factor);
                rb.config("random", *random_n);
                const LevelSystem sys = system_from(load_json(*system_path));
                const Gauge g = gauge_path->empty() ? natural_gauge(sys)
                                                    : gauge_from(load_json(*gauge_path));
                const auto tests = random_test_intervals(sys, *random_n, *seed);
                const auto cert = mass_distribution_check(sys, g, parse_rational(*factor), tests);
                rb.add(cert);
                // pinned report shape for this check
                rb.report["check"] = "mass_distribution";
                rb.report["pass"] = cert.pass;
                rb.report["lower"] = rational_json(cert.lower);
                rb.report["upper"] = rational_json(cert.upper);
                rb.report["witness"] = bound_certificate_json(cert)["witness"];
                rb.report["depth"] = cert.depth;
                rb.report["seed"] = *seed;
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = verify->add_subcommand("null", "min-gauge annihilation bands");
        auto schedule_path = std::make_shared<std::string>();
        auto cover_path = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--schedule", *schedule_path, "schedule JSON")->required();
        cmd->add_option("--cover", *cover_path, "cover JSON")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("verify null");
                rb.config("schedule", *schedule_path);
                rb.config("cover", *cover_path);
                const InterleavedSchedule sched = schedule_from(load_json(*schedule_path));
                const NullCover cover = cover_from(load_json(*cover_path));
                rb.add(verify_null(sched, cover));
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = verify->add_subcommand("schedule", "independent schedule re-verification");
        auto schedule_path = std::make_shared<std::string>();
        auto model_path = std::make_shared<std::string>();
        auto cover_path = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--schedule", *schedule_path, "schedule JSON")->required();
        cmd->add_option("--model", *model_path, "model JSON (default: all-(0,1))");
        cmd->add_option("--cover", *cover_path, "cover JSON")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("verify schedule");
                rb.config("schedule", *schedule_path);
                rb.config("cover", *cover_path);
                const InterleavedSchedule sched = schedule_from(load_json(*schedule_path));
                const OpenSetModel model = load_model(*model_path, sched.depth());
                const NullCover cover = cover_from(load_json(*cover_path));
                rb.add(verify_schedule_consistency(sched, model, cover));
                return rb.finish(*report_path);
            };
        });
    }

    // ---- digits -------------------------------------------------------------
    auto* digits_cmd = app.add_subcommand("digits", "digit-expansion sets");
    digits_cmd->require_subcommand(1);

    {
        auto* cmd = digits_cmd->add_subcommand("membership", "constraint membership");
        auto bases_csv = std::make_shared<std::string>();
        auto digits_csv = std::make_shared<std::string>();
        auto constraint = std::make_shared<std::string>("half_sum");
        auto p = std::make_shared<std::string>("1");
        auto radius = std::make_shared<std::string>("0");
        auto basis_const = std::make_shared<std::string>("1");
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--bases", *bases_csv, "comma-separated bases")->required();
        cmd->add_option("--digits", *digits_csv, "comma-separated digits")->required();
        cmd->add_option("--constraint", *constraint, "half_sum | lp_ball | none");
        cmd->add_option("--p", *p, "lp exponent (rational)");
        cmd->add_option("--radius", *radius, "lp radius (rational)");
        cmd->add_option("--basis-const", *basis_const, "coordinate constant C");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits membership");
                rb.config("bases", *bases_csv);
                rb.config("digits", *digits_csv);
                rb.config("constraint", *constraint);
                DigitSetSpec spec;
                spec.base.bases = parse_int_list(*bases_csv);
                spec.base.validate();
                if (*constraint == "half_sum")
                    spec.constraint = ConstraintKind::half_sum;
                else if (*constraint == "lp_ball")
                    spec.constraint = ConstraintKind::lp_ball;
                else if (*constraint == "none")
                    spec.constraint = ConstraintKind::none;
                else
                    throw ParseError("unknown constraint: " + *constraint);
                spec.p = parse_rational(*p);
                spec.radius = parse_rational(*radius);
                spec.basis_const = parse_rational(*basis_const);
                DigitVector v;
                v.digits = parse_int_list(*digits_csv);
                const auto res = membership(spec, v);
                rb.add(res.cert);
                rb.report["member"] = res.member;
                rb.report["value"] = rational_json(value_of(spec.base, v));
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd =
            digits_cmd->add_subcommand("perfect", "perfect translate scaffold + disjointness");
        auto bases_path = std::make_shared<std::string>();
        auto levels = std::make_shared<int>(3);
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--bases", *bases_path, "bases JSON (default: powers of 4)");
        cmd->add_option("--levels", *levels, "perfect-set levels")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits perfect");
                rb.config("bases", *bases_path);
                rb.config("levels", *levels);
                std::optional<BaseSystem> bases;
                if (!bases_path->empty()) bases = bases_from(load_json(*bases_path));
                const auto demo = build_translate_demo(*levels, std::move(bases));
                rb.add(demo.cert);
                Json positions = Json::array();
                for (const auto& pos : demo.P.positions) positions.push_back(pos);
                Json amplitudes = Json::array();
                for (const auto& a : demo.P.amplitudes) amplitudes.push_back(bigint_json(a));
                rb.report["positions"] = positions;
                rb.report["amplitudes"] = amplitudes;
                rb.report["pairs"] = demo.pairs;
                rb.report["min_margin"] = rational_json(demo.min_margin);
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = digits_cmd->add_subcommand("boxdim", "box counting of the digit set");
        auto davies = std::make_shared<bool>(false);
        auto depth = std::make_shared<int>(8);
        auto bases_csv = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        auto csv_path = std::make_shared<std::string>();
        cmd->add_flag("--davies", *davies, "n_i = i+1, N_i = (i+1)^i");
        cmd->add_option("--depth", *depth, "truncation depth");
        cmd->add_option("--bases", *bases_csv, "explicit bases (without --davies)");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->add_option("--csv", *csv_path, "CSV export path");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits boxdim");
                rb.config("davies", *davies);
                rb.config("depth", *depth);
                BaseSystem b;
                if (*davies)
                    b = davies_bases(*depth);
                else if (!bases_csv->empty()) {
                    b.bases = parse_int_list(*bases_csv);
                    b.validate();
                } else
                    throw ParseError("boxdim needs --davies or --bases");
                std::vector<BoxRow> rows;
                BigInt denom = 1;
                for (int d = 1; d <= *depth; ++d) {
                    denom *= b.denom(d);
                    std::vector<Rational> pts;
                    for (const auto& v : enumerate_half_sum(b, d)) pts.push_back(value_of(b, v));
                    rows.push_back(box_counting_points(pts, {Rational(1, denom)})[0]);
                }
                rb.report["rows"] = box_rows_json(rows);
                Certificate cert;
                cert.name = "box_ratio_decreasing";
                for (std::size_t i = 3; i < rows.size(); ++i)
                    if (rows[i].ratio >= rows[i - 1].ratio)
                        cert.fail("ratio not decreasing at depth " + std::to_string(i + 1));
                if (cert.pass) cert.note("ratios", "strictly decreasing from depth 4 on");
                rb.add(cert);
                if (!csv_path->empty()) export_box_csv(rows, *csv_path);
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = digits_cmd->add_subcommand("unique", "digit representation uniqueness");
        auto bases_csv = std::make_shared<std::string>();
        auto bounds_csv = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(0);
        auto cap = std::make_shared<std::string>("2000000");
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--bases", *bases_csv, "comma-separated bases")->required();
        cmd->add_option("--bounds", *bounds_csv, "comma-separated digit bounds m_i")->required();
        cmd->add_option("--depth", *depth, "depth (default: bases length)");
        cmd->add_option("--cap-enum", *cap, "exhaustion cap");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits unique");
                rb.config("bases", *bases_csv);
                rb.config("bounds", *bounds_csv);
                BaseSystem b;
                b.bases = parse_int_list(*bases_csv);
                b.validate();
                const auto bounds = parse_int_list(*bounds_csv);
                const int d = *depth > 0 ? *depth : static_cast<int>(b.bases.size());
                rb.add(uniqueness_check(b, bounds, d, parse_cap(*cap)));
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = digits_cmd->add_subcommand("sidon", "greedy Sidon sequence");
        auto count = std::make_shared<int>(5);
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--count", *count, "sequence length")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits sidon");
                rb.config("count", *count);
                const auto seq = greedy_sidon(*count);
                Json arr = Json::array();
                std::vector<Rational> prefix;
                Certificate cert;
                cert.name = "greedy_sidon";
                for (const auto v : seq) {
                    arr.push_back(v);
                    prefix.emplace_back(v);
                    if (!rigidity_check(prefix).rigid)
                        cert.fail("prefix through " + std::to_string(v) + " is not Sidon");
                }
                if (cert.pass) cert.note("sequence length", std::to_string(seq.size()));
                rb.report["sequence"] = arr;
                rb.add(cert);
                return rb.finish(*report_path);
            };
        });
    }

    {
        auto* cmd = digits_cmd->add_subcommand("rigidity", "Sidon / trivial-difference check");
        auto set_csv = std::make_shared<std::string>();
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--set", *set_csv, "comma-separated rationals")->required();
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("digits rigidity");
                rb.config("set", *set_csv);
                const auto S = parse_rat_list(*set_csv);
                const auto res = rigidity_check(S);
                Certificate cert;
                cert.name = "rigidity";
                cert.note("rigid", res.rigid ? "true" : "false");
                if (res.witness) {
                    const auto& [x, y, u, v] = *res.witness;
                    cert.witness["x"] = to_pq_string(x);
                    cert.witness["y"] = to_pq_string(y);
                    cert.witness["u"] = to_pq_string(u);
                    cert.witness["v"] = to_pq_string(v);
                }
                rb.report["rigid"] = res.rigid;
                rb.add(cert);
                return rb.finish(*report_path);
            };
        });
    }

    // ---- convolve -----------------------------------------------------------
    {
        auto* cmd =
            app.add_subcommand("convolve", "pushforward of product measures under summation");
        auto measure_paths = std::make_shared<std::vector<std::string>>();
        auto out = std::make_shared<std::string>();
        auto cap = std::make_shared<std::string>("2^22");
        auto report_path = std::make_shared<std::string>();
        cmd->add_option("--measures", *measure_paths, "measure JSON files")->required();
        cmd->add_option("--out", *out, "output measure JSON");
        cmd->add_option("--cap-enum", *cap, "tuple cap");
        cmd->add_option("--report", *report_path, "report JSON");
        cmd->callback([=, &runner]() {
            runner = [=]() {
                ReportBuilder rb("convolve");
                rb.config("measures", Json(*measure_paths));
                std::vector<DiscreteMeasure> ms;
                Rational mass_product = 1;
                for (const auto& path : *measure_paths) {
                    ms.push_back(measure_from(load_json(path)));
                    mass_product *= ms.back().mass();
                }
                const auto conv = pushforward_sum(ms, parse_cap(*cap));
                Certificate cert;
                cert.name = "mass_conservation";
                cert.check("pushforward mass equals product of masses", conv.mass(), Rel::EQ,
                           mass_product);
                rb.add(cert);
                if (!out->empty()) save_json(measure_json(conv), *out);
                return rb.finish(*report_path);
            };
        });
    }

    // ---- export -------------------------------------------------------------
    {
        auto* exp = app.add_subcommand("export", "CSV exports");
        auto* cmd = exp->add_subcommand("csv", "gauge breakpoints or box table to CSV");
        auto gauge_path = std::make_shared<std::string>();
        auto table_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--gauge", *gauge_path, "gauge JSON");
        cmd->add_option("--boxtable", *table_path, "boxdim report JSON (rows field)");
        cmd->add_option("--out", *out, "CSV output path")->required();
        cmd->callback([=, &runner]() {
            runner = [=]() {
                if (!gauge_path->empty()) {
                    export_gauge_csv(gauge_from(load_json(*gauge_path)), *out);
                } else if (!table_path->empty()) {
                    const Json j = load_json(*table_path);
                    if (!j.contains("rows")) throw ParseError("boxtable JSON needs a rows array");
                    std::vector<BoxRow> rows;
                    for (const auto& rj : j["rows"]) {
                        BoxRow row;
                        row.delta = rational_from(rj.at("delta"), "rows.delta");
                        row.count = bigint_from(rj.at("count"), "rows.count");
                        row.ratio = rj.value("ratio_float", 0.0);
                        rows.push_back(row);
                    }
                    export_box_csv(rows, *out);
                } else {
                    throw ParseError("export csv needs --gauge or --boxtable");
                }
                std::cout << "[PASS] export csv\n";
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return runner ? runner() : 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    }
}
