// Command-line front end: bounds, constructions, verification, search, plots.

#include <smallpoly/smallpoly.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace sp = smallpoly;

namespace {

int digits = 0;

std::string real(double v) { return sp::format_real(v, digits); }

std::string interval(const sp::BoundedValue& b) { return "[" + real(b.lo) + ", " + real(b.hi) + "]"; }

/// A path on disk, or a fixture name with or without a .json suffix.
sp::PolygonFile load(const std::string& arg) {
    if (std::filesystem::exists(arg)) return sp::read_polygon_file(arg);
    const std::string stem = std::filesystem::path(arg).stem().string();
    for (auto name : sp::fixture_names())
        if (stem == name) return sp::fixture(name);
    throw sp::Error("no such file or fixture: " + arg);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sp::Error("cannot write " + path);
    out << text;
    if (!out) throw sp::Error("failed writing " + path);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text(path, text);
}

int cmd_verify(const std::string& file) {
    const auto f = load(file);
    const sp::ConvexPolygon p = sp::to_polygon(f);
    const auto r = sp::verify(p);
    std::cout << "source         " << (f.source.empty() ? file : f.source) << "\n"
              << "n              " << r.n << "\n"
              << "convex         " << (r.convex ? "yes" : "no") << "\n"
              << "perimeter      " << real(sp::perimeter(p)) << "\n"
              << "  certified    " << interval(r.perimeter) << " (" << r.certified_digits << " digits)\n"
              << "diameter       " << real(sp::diameter(p).length) << "\n"
              << "  certified    " << interval(r.diameter) << "\n"
              << "unit diameter  " << (r.unit_diameter ? "yes" : "no") << "\n"
              << "topology       " << sp::to_string(r.graph_topology) << "\n"
              << "cycle length   " << r.graph_topology.c << "\n"
              << "chords         " << r.graph.edges.size() << "\n"
              << "thrackle       " << (r.thrackle ? "yes" : "no") << "\n"
              << "bound          " << real(sp::upper_bound(static_cast<int>(r.n))) << "\n"
              << "bound gap      " << real(r.bound_gap) << "\n";
    if (!r.unit_diameter) {
        std::cout << "status         diameter violation\n";
        return 1;
    }
    if (!r.ok()) {
        std::cout << "status         structure check failed\n";
        return 1;
    }
    std::cout << "status         ok\n";
    return 0;
}

int cmd_graph(const std::string& file) {
    const sp::ConvexPolygon p = sp::to_polygon(load(file));
    const auto g = sp::extract(p);
    std::cout << "topology " << sp::to_string(sp::topology_of(g)) << "\n";
    std::cout << "cycle";
    for (auto v : g.cycle) std::cout << ' ' << v;
    std::cout << "\n";
    for (std::size_t j = 0; j < g.cycle.size(); ++j) {
        if (g.pendants[j].empty()) continue;
        std::cout << "pendants of " << g.cycle[j] << ":";
        for (auto v : g.pendants[j]) std::cout << ' ' << v;
        std::cout << "\n";
    }
    return 0;
}

int cmd_optimize(int n, std::optional<int> cycle, const sp::SolveOptions& opts, const std::string& out) {
    std::vector<int> cycles;
    if (cycle) cycles.push_back(*cycle);
    const auto report = sp::search(n, opts, cycles);
    std::map<int, const sp::SolveResult*> best_per_cycle;
    std::map<int, sp::Topology> topo_per_cycle;
    for (const auto& [t, r] : report.per_topology) {
        if (!r.converged) continue;
        auto& slot = best_per_cycle[t.c];
        if (!slot || r.perimeter > slot->perimeter) {
            slot = &r;
            topo_per_cycle[t.c] = t;
        }
    }
    for (const auto& [c, r] : best_per_cycle)
        std::cerr << "c=" << c << "  " << real(r->perimeter) << "  " << sp::to_string(topo_per_cycle[c]) << "\n";
    if (best_per_cycle.empty() || !report.best.polygon) {
        std::cerr << "error: no topology converged to a valid small polygon\n";
        return 1;
    }
    std::cout << "best topology " << sp::to_string(report.best_topology) << "\n"
              << "perimeter     " << real(report.best.perimeter) << "\n"
              << "bound gap     " << real(sp::upper_bound(n) - report.best.perimeter) << "\n";
    if (!out.empty())
        write_text(out, sp::serialize(sp::to_file(sp::canonicalize(*report.best.polygon),
                                                  "optimized small " + std::to_string(n) + "-gon",
                                                  sp::to_string(report.best_topology)),
                                      digits));
    return 0;
}

int cmd_records(bool fresh, const sp::SolveOptions& opts) {
    std::map<int, double> computed;
    std::cout << "cycle  published           computed            source\n";
    for (const auto& rec : sp::reference_records()) {
        std::string value = "-";
        if (fresh) {
            if (!computed.count(rec.cycle)) {
                const auto report = sp::search(32, opts, {rec.cycle});
                computed[rec.cycle] = report.best.converged ? report.best.perimeter : 0.0;
            }
            value = real(computed[rec.cycle]);
        }
        char line[160];
        std::snprintf(line, sizeof line, "%-6d %-19s %-19s %s\n", rec.cycle, real(rec.perimeter).c_str(),
                      value.c_str(), rec.source.c_str());
        std::cout << line;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small polygons of maximal perimeter"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--digits", digits, "Significant digits for printed reals (default: shortest round-trip)")
        ->check(CLI::Range(1, 40));

    int n = 0;
    auto* bound = app.add_subcommand("bound", "Print the perimeter bound 2n sin(pi/2n)");
    bound->add_option("N", n, "Vertex count")->required();

    std::string kind, out, file;
    auto* construct = app.add_subcommand("construct", "Build a closed-form small polygon");
    construct->add_option("kind", kind, "Construction")->required()->check(CLI::IsMember({"regular"}));
    construct->add_option("N", n, "Vertex count")->required();
    construct->add_option("-o,--output", out, "Output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Certify perimeter, diameter and diameter graph");
    verify->add_option("FILE", file, "Polygon file or fixture name")->required();

    auto* graph = app.add_subcommand("graph", "Print the diameter graph topology");
    graph->add_option("FILE", file, "Polygon file or fixture name")->required();

    sp::SolveOptions opts;
    std::optional<int> cycle;
    auto* optimize = app.add_subcommand("optimize", "Search topologies for the longest perimeter");
    optimize->add_option("N", n, "Vertex count")->required()->check(CLI::Range(4, 200));
    optimize->add_option("--cycle", cycle, "Restrict to one odd cycle length");
    optimize->add_option("--restarts", opts.restarts, "Descents per cycle length")->check(CLI::PositiveNumber);
    optimize->add_option("--seed", opts.seed, "Random seed")->envname("SMALLPOLY_SEED");
    optimize->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    optimize->add_option("-o,--output", out, "Write the best polygon here");

    bool published_only = false;
    auto* records = app.add_subcommand("records", "Published 32-gon records next to fresh optimizer values");
    records->add_flag("--published-only", published_only, "Skip the optimizer runs");
    records->add_option("--seed", opts.seed, "Random seed")->envname("SMALLPOLY_SEED");
    records->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot", "Write an SVG of the polygon and its diameter chords");
    plot->add_option("FILE", file, "Polygon file or fixture name")->required();
    plot->add_option("-o,--output", out, "SVG output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*bound) {
            if (digits == 0) digits = 16;
            std::cout << real(sp::upper_bound(n)) << "\n";
            return 0;
        }
        if (*construct) {
            const auto p = sp::regular_small(n);
            emit(out, sp::serialize(sp::to_file(p, "regular small " + std::to_string(n) + "-gon",
                                                "regular_small(" + std::to_string(n) + ")"),
                                    digits));
            return 0;
        }
        if (*verify) return cmd_verify(file);
        if (*graph) return cmd_graph(file);
        if (*optimize) return cmd_optimize(n, cycle, opts, out);
        if (*records) return cmd_records(!published_only, opts);
        if (*plot) {
            const sp::ConvexPolygon p = sp::to_polygon(load(file));
            write_text(out, sp::emit_svg(p, sp::extract(p)));
            return 0;
        }
    } catch (const sp::StructureError& e) {
        std::cerr << "error: structure check failed (" << sp::to_string(e.kind()) << "): " << e.what() << "\n";
        return 1;
    } catch (const sp::ValidationError& e) {
        std::cerr << "error: convexity check failed: " << e.what() << "\n";
        return 1;
    } catch (const sp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
