#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intwist/job.hpp"

using namespace intwist;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open job file: " + path, 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json report_to_json(const RunReport& rep) {
    json j;
    j["result"] = rep.result;
    j["order"] = rep.order;
    j["dims"] = rep.dims;
    j["reductions"] = rep.reductions;
    j["oracle"] = json::array();
    for (const auto& r : rep.oracle) {
        json s = json::object();
        for (const auto& [name, value] : r.sample.bindings)
            s[name] = value.get_str();
        j["oracle"].push_back(
            {{"sample", s},
             {"numeric",
              {{"re", r.numeric.real().convert_to<double>()},
               {"im", r.numeric.imag().convert_to<double>()}}},
             {"exact_at_sample", r.exact_at_sample.get_str()},
             {"rel_err", r.rel_err}});
    }
    return j;
}

void print_plain(const RunReport& rep, bool verbose) {
    std::cout << "order:";
    for (const auto& v : rep.order) std::cout << ' ' << v;
    std::cout << "\ndims:";
    for (auto d : rep.dims) std::cout << ' ' << d;
    std::cout << "\nresult: " << rep.result << "\n";
    if (verbose)
        for (const auto& line : rep.trace) std::cout << line << "\n";
    for (std::size_t i = 0; i < rep.oracle.size(); ++i) {
        const auto& r = rep.oracle[i];
        std::cout << "oracle[" << i << "]:";
        for (const auto& [name, value] : r.sample.bindings)
            std::cout << ' ' << name << '=' << value.get_str();
        std::cout << " numeric=(" << r.numeric.real().convert_to<double>()
                  << "," << r.numeric.imag().convert_to<double>()
                  << ") exact=" << r.exact_at_sample.get_str()
                  << " rel_err=" << r.rel_err << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact intersection numbers of twisted cocycles"};
    std::string job_path, trace_path;
    std::vector<std::string> order;
    bool check_assumptions = true, want_json = false, verbose = false;
    int oracle_n = 0;
    unsigned seed = 1;
    app.add_option("--job", job_path, "job file")->required();
    app.add_option("--order", order, "override the fibration order");
    app.add_flag("--check-assumptions,!--no-check-assumptions", check_assumptions,
                 "verify the simple-pole and critical-point-count assumptions");
    app.add_option("--oracle", oracle_n, "number of numeric confirmation samples");
    app.add_option("--seed", seed, "oracle sample seed");
    app.add_flag("--json", want_json, "machine-readable report");
    app.add_flag("--verbose", verbose, "per-level trace on stdout");
    app.add_option("--trace", trace_path, "write the per-level trace to a file");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        Job job = parse_job(read_file(job_path));
        RunOptions opt;
        opt.order_override = order;
        opt.check_assumptions = check_assumptions;
        opt.oracle_samples = oracle_n;
        opt.seed = seed;
        opt.want_trace = verbose || !trace_path.empty();
        RunReport rep = run_job(job, opt);
        if (!trace_path.empty()) {
            std::ofstream tf(trace_path);
            for (const auto& line : rep.trace) tf << line << "\n";
        }
        if (want_json)
            std::cout << report_to_json(rep).dump(2) << "\n";
        else
            print_plain(rep, verbose);
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const UndeclaredName& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const DegenerateFibration& e) {
        std::cerr << "assumption violation: " << e.what() << "\n";
        if (!e.rotation_hint.empty())
            std::cerr << "suggestion: " << e.rotation_hint << "\n";
        return 2;
    } catch (const HigherPoleConnection& e) {
        std::cerr << "assumption violation: " << e.what() << "\n";
        return 2;
    } catch (const GenericityError& e) {
        std::cerr << "genericity failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularCMatrix& e) {
        std::cerr << "genericity failure: " << e.what() << "\n";
        return 3;
    } catch (const SingularSystem& e) {
        std::cerr << "genericity failure: " << e.what() << "\n";
        return 3;
    } catch (const RootClustering& e) {
        std::cerr << "genericity failure: " << e.what() << "\n";
        return 3;
    } catch (const ToleranceExceeded& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
