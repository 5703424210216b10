// bahc: cluster a matrix or dataset with Bayesian log-Bayes-factor
// similarities (plus mutual-information and linkage baselines), run the
// synthetic benchmark, build consensus clusterings, and print the
// homogeneous-model mutual-information analytics.
//
// Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bahc/bahc.hpp"
#include "bahc/json_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// temp-file-then-rename so readers never see a partial file
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path);
    return ss.str();
}

struct CsvTable {
    std::vector<std::string> names;  // empty if the file had no header row
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& tok : out) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        tok = (b == std::string::npos) ? "" : tok.substr(b, e - b + 1);
    }
    return out;
}

bool parse_double(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

// Numeric CSV; a non-numeric first row is taken as variable names.
CsvTable read_csv(const std::string& path) {
    const std::string text = read_file(path);
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto toks = split_csv_line(line);
        std::vector<double> row(toks.size());
        bool numeric = true;
        for (std::size_t k = 0; k < toks.size(); ++k)
            if (!parse_double(toks[k], row[k])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (!first) throw UsageError(path + ": non-numeric row in matrix body");
            table.names = toks;
        } else {
            if (!table.rows.empty() && row.size() != table.rows.front().size())
                throw UsageError(path + ": ragged rows");
            table.rows.push_back(std::move(row));
        }
        first = false;
    }
    if (table.rows.empty()) throw UsageError(path + ": no numeric rows");
    if (!table.names.empty() && table.names.size() != table.rows.front().size())
        throw UsageError(path + ": header width does not match the data");
    return table;
}

bahc::SymMatrix square_matrix_from(const CsvTable& table, const std::string& path) {
    const std::size_t d = table.rows.size();
    if (table.rows.front().size() != d)
        throw UsageError(path + ": expected a square matrix, got " + std::to_string(d) + " x " +
                         std::to_string(table.rows.front().size()));
    bahc::SymMatrix m(static_cast<int>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (std::abs(table.rows[i][j] - table.rows[j][i]) > 1e-9)
                throw UsageError(path + ": matrix is not symmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
            m.set(static_cast<int>(i), static_cast<int>(j), table.rows[i][j]);
        }
    return m;
}

std::vector<std::string> default_names(int d) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

// ------------------------- cluster -------------------------

struct ClusterArgs {
    std::string input;
    std::string input_kind;
    int n = 0;
    bool mean_known = false;
    std::string measure;
    std::string stop = "auto";
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_cluster(const ClusterArgs& args) {
    const CsvTable table = read_csv(args.input);

    std::optional<bahc::ScatterInput> scatter;
    if (args.input_kind == "cov" || args.input_kind == "corr") {
        if (args.n < 2) throw UsageError("--n (sample count) is required for matrix input");
        const bahc::SymMatrix m = square_matrix_from(table, args.input);
        scatter = args.input_kind == "cov"
                      ? bahc::ScatterInput::from_covariance(m, args.n, args.mean_known)
                      : bahc::ScatterInput::from_correlation(m, args.n, args.mean_known);
    } else if (args.input_kind == "data") {
        if (args.n != 0 && args.n != static_cast<int>(table.rows.size()))
            throw UsageError("--n disagrees with the number of data rows");
        // with a known mean, data rows are taken as already centered
        scatter = args.mean_known
                      ? bahc::scatter_from_data(table.rows, true,
                                                std::vector<double>(table.rows.front().size(), 0.0))
                      : bahc::scatter_from_data(table.rows, false);
    } else {
        throw UsageError("--input-kind must be cov, corr, or data");
    }
    const int d = scatter->dim();
    const std::vector<std::string> names = table.names.empty() ? default_names(d) : table.names;

    const bahc::MethodSpec method = bahc::parse_method(args.measure);
    if (method.auto_stop) throw UsageError("say --stop auto instead of an auto-suffixed measure name");

    bahc::StopRule stop_rule = bahc::StopRule::Full;
    std::optional<int> cut_k;
    if (args.stop == "auto") stop_rule = bahc::StopRule::Auto;
    else if (args.stop == "full") stop_rule = bahc::StopRule::Full;
    else if (args.stop.rfind("k=", 0) == 0) {
        try {
            cut_k = std::stoi(args.stop.substr(2));
        } catch (const std::exception&) {
            throw UsageError("--stop k=<int>: cannot parse \"" + args.stop + "\"");
        }
        if (*cut_k < 1 || *cut_k > d) throw UsageError("--stop k out of range 1.." + std::to_string(d));
    } else {
        throw UsageError("--stop must be auto, full, or k=<int>");
    }
    if (stop_rule == bahc::StopRule::Auto && !bahc::is_bayesian(method.measure))
        throw UsageError("--stop auto needs a log-Bayes-factor measure (bayescov, bayescorr, bic, bayesprec)");

    bahc::Hierarchy hierarchy;
    std::optional<bahc::Hyperparams> hyper;
    if (bahc::is_linkage(method.measure)) {
        const bahc::SymMatrix corr = scatter->kind == bahc::ScatterKind::CorrelationScale
                                         ? scatter->sample_cov()
                                         : bahc::cov_to_corr(scatter->sample_cov());
        hierarchy = bahc::ahc_linkage(corr, bahc::SimilaritySpec{method.measure, method.use_abs, {}},
                                      args.seed);
    } else {
        // the correlation strategy is defined on correlation-scale input
        if (method.measure == bahc::Measure::BayesCorr) scatter = scatter->to_correlation_scale();
        if (method.measure == bahc::Measure::BayesCov) hyper = bahc::bayes_cov_hyper(*scatter);
        else if (method.measure == bahc::Measure::BayesCorr) hyper = bahc::bayes_corr_hyper(d);
        else if (method.measure == bahc::Measure::BayesPrec) hyper = bahc::bayes_precision_hyper(*scatter);
        hierarchy = bahc::ahc(*scatter, bahc::SimilaritySpec{method.measure, false, hyper}, stop_rule,
                              args.seed);
    }

    bahc::Partition selected = cut_k ? bahc::cut(hierarchy, *cut_k) : bahc::auto_partition(hierarchy);

    bahc::HierarchyDocument::Input input{args.input, args.input_kind, scatter->n_samples,
                                         args.mean_known, d, names};
    bahc::HierarchyDocument::Method method_doc{method.name, method.use_abs, args.stop, args.seed,
                                               std::nullopt};
    if (hyper) {
        const char* variant = hyper->variant == bahc::HyperVariant::Cov ? "cov"
                              : hyper->variant == bahc::HyperVariant::Corr ? "corr" : "precision";
        method_doc.hyper = bahc::HierarchyDocument::Hyper{hyper->nu, hyper->lambda_diag, variant,
                                                          hyper->omega_scale};
    }
    const bahc::HierarchyDocument doc =
        bahc::build_document(std::move(input), std::move(method_doc), hierarchy, selected, names);
    write_file_atomic(args.out, bahc::to_json(doc).dump(2) + "\n");
    return kExitOk;
}

// ------------------------- bench -------------------------

int cmd_bench(const std::string& config_path, const std::string& out_dir, bool timings,
              int desk_d, int full_grid_d) {
    bahc::SimConfig cfg;
    if (!config_path.empty()) {
        bahc::json cfg_json;
        try {
            cfg_json = bahc::json::parse(read_file(config_path));
        } catch (const bahc::json::exception& e) {
            throw UsageError(config_path + ": " + e.what());
        }
        cfg = bahc::sim_config_from_json(cfg_json);
    } else if (full_grid_d > 0) {
        cfg = bahc::full_grid_config(full_grid_d);
        std::cerr << "warning: --full-grid runs " << full_grid_d
                  << " variables over the complete protocol grid (500 replications, all cluster "
                     "counts); expect a long run\n";
    } else if (desk_d > 0) {
        cfg = bahc::desk_scale_config(desk_d);
    } else {
        throw UsageError("bench: one of --config, --desk, --full-grid is required");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    const auto results = bahc::run_benchmark(cfg);
    write_file_atomic(out_dir + "/results.csv", bahc::results_to_csv(results, timings));
    write_file_atomic(out_dir + "/summary.csv",
                      bahc::summary_to_csv(bahc::summarize(results, cfg.methods)));
    return kExitOk;
}

// ------------------------- consensus -------------------------

// Replays merge steps recorded as name lists and cuts at k; falls back to the
// stored auto partition when the hierarchy stopped before reaching k.
bahc::Partition partition_from_document(const bahc::HierarchyDocument& doc, int k,
                                        const std::vector<std::string>& names) {
    const int d = static_cast<int>(names.size());
    const int want_merges = d - k;
    if (want_merges > static_cast<int>(doc.steps.size()))
        return bahc::partition_from_blocks(doc.auto_partition, names);
    std::vector<std::vector<std::string>> blocks;
    for (const auto& n : names) blocks.push_back({n});
    auto find_block = [&](const std::vector<std::string>& members) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b] == members) return b;
        throw UsageError("hierarchy document: merge step references an unknown cluster");
    };
    for (int m = 0; m < want_merges; ++m) {
        const auto& st = doc.steps[static_cast<std::size_t>(m)];
        const std::size_t bl = find_block(st.left);
        const std::size_t br = find_block(st.right);
        std::vector<std::string> merged = st.left;
        merged.insert(merged.end(), st.right.begin(), st.right.end());
        std::sort(merged.begin(), merged.end());
        blocks[bl] = std::move(merged);
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(br));
    }
    return bahc::partition_from_blocks(blocks, names);
}

int cmd_consensus(int k, const std::string& out_prefix, const std::vector<std::string>& inputs) {
    if (inputs.empty()) throw UsageError("consensus: at least one input file required");

    std::vector<std::string> names;
    std::vector<bahc::Partition> partitions;
    for (const auto& path : inputs) {
        bahc::json j;
        try {
            j = bahc::json::parse(read_file(path));
        } catch (const bahc::json::exception& e) {
            throw UsageError(path + ": " + e.what());
        }
        std::vector<std::string> file_names;
        std::vector<std::vector<std::string>> blocks;
        std::optional<bahc::HierarchyDocument> doc;
        if (j.contains("steps")) {
            doc = bahc::document_from_json(j);
            file_names = doc->input.names;
        } else if (j.contains("blocks")) {
            file_names = j.at("names").get<std::vector<std::string>>();
            blocks = j.at("blocks").get<std::vector<std::vector<std::string>>>();
        } else {
            throw UsageError(path + ": neither a hierarchy document nor a partition document");
        }
        std::vector<std::string> sorted_names = file_names;
        std::sort(sorted_names.begin(), sorted_names.end());
        if (names.empty()) names = sorted_names;
        else if (names != sorted_names)
            throw UsageError(path + ": variable names disagree with the previous inputs");
        if (static_cast<int>(names.size()) < k)
            throw UsageError("consensus: k exceeds the number of variables");

        partitions.push_back(doc ? partition_from_document(*doc, k, names)
                                 : bahc::partition_from_blocks(blocks, names));
    }

    const auto res = bahc::consensus(partitions, k);

    std::string csv;
    for (std::size_t i = 0; i < names.size(); ++i) csv += (i ? "," : "") + names[i];
    csv += "\n";
    char buf[40];
    for (int i = 0; i < res.stability.d; ++i) {
        for (int j = 0; j < res.stability.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", res.stability.freq(i, j));
            csv += (j ? "," : "") + std::string(buf);
        }
        csv += "\n";
    }
    write_file_atomic(out_prefix + "_stability.csv", csv);
    write_file_atomic(out_prefix + "_consensus.json",
                      bahc::partition_to_json(res.partition, names).dump(2) + "\n");
    return kExitOk;
}

// ------------------------- mi -------------------------

int cmd_mi(const std::vector<double>& homog, const std::vector<double>& bias) {
    char buf[64];
    if (!homog.empty()) {
        const int di = static_cast<int>(homog[0]), dj = static_cast<int>(homog[1]);
        const double rho = homog[2];
        const bahc::SymMatrix a = bahc::homogeneous_matrix(di + dj, rho);
        const bahc::ScatterInput sc = bahc::ScatterInput::from_correlation(a, 1000, true);
        std::vector<int> iv, jv;
        for (int t = 0; t < di; ++t) iv.push_back(t);
        for (int t = 0; t < dj; ++t) jv.push_back(di + t);
        const bahc::IndexSet i(iv), j(jv);
        std::snprintf(buf, sizeof buf, "%.12g", bahc::analytic_homogeneous_mi(di, dj, rho));
        std::cout << "analytic_mi=" << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.12g", bahc::mutual_info_plugin(sc, i, j));
        std::cout << "plugin_mi=" << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.12g", bahc::normalized_mutual_info(sc, i, j));
        std::cout << "normalized_mi=" << buf << "\n";
    } else {
        const double di = bias[0], dj = bias[1], n = bias[2];
        if (n <= 0) throw UsageError("--bias: n must be positive");
        std::snprintf(buf, sizeof buf, "%.12g", di * dj / (2.0 * n));
        std::cout << "bias=" << buf << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian model-comparison hierarchical clustering"};
    app.require_subcommand(1);

    ClusterArgs cargs;
    CLI::App* cluster = app.add_subcommand("cluster", "cluster a matrix or dataset");
    cluster->add_option("--input", cargs.input, "CSV input (square matrix or data rows)")->required();
    cluster->add_option("--input-kind", cargs.input_kind, "cov | corr | data")->required();
    cluster->add_option("--n", cargs.n, "sample count behind a matrix input");
    cluster->add_option("--mean-known", cargs.mean_known,
                        "true: mean known (n_eff = N), false: sample mean (n_eff = N-1)");
    cluster->add_option("--measure", cargs.measure, "similarity measure")->required();
    cluster->add_option("--stop", cargs.stop, "auto | full | k=<int>");
    cluster->add_option("--seed", cargs.seed, "tie-breaking seed");
    cluster->add_option("--out", cargs.out, "output hierarchy JSON")->required();

    std::string config_path, out_dir;
    bool timings = false;
    int desk_d = 0, full_grid_d = 0;
    CLI::App* bench = app.add_subcommand("bench", "run the synthetic benchmark");
    CLI::Option* ocfg = bench->add_option("--config", config_path, "benchmark config JSON");
    CLI::Option* odesk = bench->add_option("--desk", desk_d, "built-in desk-scale grid for D variables");
    CLI::Option* ofull =
        bench->add_option("--full-grid", full_grid_d, "built-in full protocol grid for D variables");
    ocfg->excludes(odesk)->excludes(ofull);
    odesk->excludes(ofull);
    bench->add_option("--out-dir", out_dir, "output directory")->required();
    bench->add_flag("--timings", timings, "append per-run wall times (non-deterministic)");

    int k = 0;
    std::string out_prefix;
    std::vector<std::string> inputs;
    CLI::App* cons = app.add_subcommand("consensus", "evidence-accumulation consensus clustering");
    cons->add_option("--k", k, "number of consensus clusters")->required();
    cons->add_option("--out-prefix", out_prefix, "output file prefix")->required();
    cons->add_option("inputs", inputs, "hierarchy or partition JSON files")->required();

    std::vector<double> homog, bias;
    CLI::App* mi = app.add_subcommand("mi", "homogeneous-model mutual information analytics");
    CLI::Option* oh = mi->add_option("--homog", homog, "di dj rho")->expected(3);
    CLI::Option* ob = mi->add_option("--bias", bias, "di dj n")->expected(3);
    oh->excludes(ob);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(cargs);
        if (bench->parsed()) return cmd_bench(config_path, out_dir, timings, desk_d, full_grid_d);
        if (cons->parsed()) return cmd_consensus(k, out_prefix, inputs);
        if (mi->parsed()) {
            if (homog.empty() == bias.empty())
                throw UsageError("mi: exactly one of --homog or --bias is required");
            return cmd_mi(homog, bias);
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const bahc::InvalidArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bahc::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bahc::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
