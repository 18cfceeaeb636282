#include "posers/cli.hpp"

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "posers/attack.hpp"
#include "posers/auth.hpp"
#include "posers/design_io.hpp"
#include "posers/error.hpp"
#include "posers/fastx.hpp"
#include "posers/ingest.hpp"
#include "posers/math.hpp"
#include "posers/registry.hpp"
#include "posers/report.hpp"
#include "posers/synth.hpp"

namespace posers::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string format = "text";

    report::Format report_format() const { return format == "kv" ? report::Format::kv : report::Format::text; }
};

struct DesignNewArgs {
    std::size_t length = 40, k1 = 10, k2 = 10, k3 = 0;
    double epsilon = 1e-6;
    std::string flank5{kDefaultFlank5}, flank3{kDefaultFlank3};
    std::string out;
    bool force = false, reveal = false;
};

struct LibraryOut {
    std::string out;
    std::string as = "fastq";
    LibraryFormat format() const { return as == "fasta" ? LibraryFormat::fasta : LibraryFormat::fastq; }
};

struct ExtractArgs {
    std::string design;
    std::size_t length = 40;
    std::string flank5{kDefaultFlank5}, flank3{kDefaultFlank3};
    bool bare = false;
    std::size_t max_mismatch = 2;
    bool no_rc = false;
};

class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::trunc);
        if (!file_) throw Error("cannot open " + path + " for writing");
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return in;
}

std::vector<SequenceRecord> read_records(const std::string& path) {
    auto in = open_input(path);
    return parse_fastx(in);
}

std::vector<double> parse_ratios(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("bad ratio '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

DesignParams params_of(const Design& d, double epsilon) {
    return {d.length, d.count_with_cardinality(1), d.count_with_cardinality(2), d.count_with_cardinality(3), epsilon};
}

// Design used only to cut regions out of reads (length + flanks, no rules).
Design extraction_design(const ExtractArgs& a) {
    if (!a.design.empty()) {
        auto d = load_design(a.design);
        d.rules.clear();
        d.ratios.reset();
        return d;
    }
    Design d;
    d.id = "extract";
    d.length = a.length;
    if (!a.bare) {
        d.flank5 = a.flank5;
        d.flank3 = a.flank3;
    }
    require_valid(d);
    return d;
}

RegionBlock extract_regions(const std::string& input, const Design& design, const ExtractArgs& a,
                            ingest::FilterReport& report) {
    auto in = open_input(input);
    return ingest::filter_stream(in, design, {a.max_mismatch, !a.no_rc}, report);
}

void add_extract_options(CLI::App* cmd, ExtractArgs& a) {
    cmd->add_option("--design", a.design, "Design file supplying L and flanks");
    cmd->add_option("--length", a.length, "Design-region length when no design is given");
    cmd->add_option("--flank5", a.flank5, "5' constant sequence");
    cmd->add_option("--flank3", a.flank3, "3' constant sequence");
    cmd->add_flag("--bare", a.bare, "Reads are bare regions without flanks");
    cmd->add_option("--max-mismatch", a.max_mismatch, "Substitutions tolerated per flank");
    cmd->add_flag("--no-rc", a.no_rc, "Do not try the reverse-complement strand");
}

std::string registry_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("POSERS_REGISTRY")) return env;
    return {};
}

int exit_for(auth::Verdict v) {
    switch (v) {
        case auth::Verdict::authentic: return kOk;
        case auth::Verdict::forged: return kForged;
        case auth::Verdict::inconclusive: return kInconclusive;
    }
    return kUsageOrIo;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"POSERS steganographic DNA tag toolkit", "posers"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Master random seed");
    app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "kv"}));

    // design
    auto* design_cmd = app.add_subcommand("design", "Create or inspect a secret design");
    design_cmd->require_subcommand(1);
    DesignNewArgs dn;
    auto* design_new = design_cmd->add_subcommand("new", "Generate a new design file");
    design_new->add_option("--length,-L", dn.length, "Design-region length")->check(CLI::PositiveNumber);
    design_new->add_option("--k1", dn.k1, "One-letter restricted positions");
    design_new->add_option("--k2", dn.k2, "Two-letter restricted positions");
    design_new->add_option("--k3", dn.k3, "Three-letter restricted positions");
    design_new->add_option("--epsilon", dn.epsilon, "Miss probability for the sample size");
    design_new->add_option("--flank5", dn.flank5, "5' constant sequence");
    design_new->add_option("--flank3", dn.flank3, "3' constant sequence");
    design_new->add_option("--out,-o", dn.out, "Design file to write")->required();
    design_new->add_flag("--force", dn.force, "Overwrite an existing file");
    design_new->add_flag("--reveal", dn.reveal, "Print the restricted positions");

    std::string stats_design;
    double stats_epsilon = 1e-6;
    bool stats_reveal = false;
    auto* design_stats = design_cmd->add_subcommand("stats", "Security quantities of a design");
    design_stats->add_option("--design", stats_design, "Design file")->required();
    design_stats->add_option("--epsilon", stats_epsilon, "Miss probability for the sample size");
    design_stats->add_flag("--reveal", stats_reveal, "Print the restricted positions");

    std::size_t calc_length = 0, calc_k1 = 10, calc_k2 = 10, calc_k3 = 0;
    double calc_epsilon = 1e-6;
    auto* calc_cmd = app.add_subcommand("calc", "Security quantities for K1/K2/K3 without a design file");
    calc_cmd->add_option("--length,-L", calc_length, "Design-region length (default K)");
    calc_cmd->add_option("--k1", calc_k1, "One-letter restricted positions");
    calc_cmd->add_option("--k2", calc_k2, "Two-letter restricted positions");
    calc_cmd->add_option("--k3", calc_k3, "Three-letter restricted positions");
    calc_cmd->add_option("--epsilon", calc_epsilon, "Miss probability for the sample size");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Simulate oligo-pool libraries");
    synth_cmd->require_subcommand(1);
    std::string synth_design, synth_ratios;
    std::uint64_t synth_reads = 0;
    double synth_error = 0.0;
    bool synth_no_flanks = false;
    LibraryOut synth_out;
    auto* synth_cpol = synth_cmd->add_subcommand("cpol", "Combined library for a design");
    synth_cpol->add_option("--design", synth_design, "Design file")->required();
    synth_cpol->add_option("--reads", synth_reads, "Number of reads")->required();
    synth_cpol->add_option("--error-rate", synth_error, "Per-base substitution rate");
    synth_cpol->add_option("--ratios", synth_ratios, "Comma-separated SPOL weights");
    synth_cpol->add_flag("--no-flanks", synth_no_flanks, "Emit bare regions");
    synth_cpol->add_option("--out,-o", synth_out.out, "Output file (default stdout)");
    synth_cpol->add_option("--as", synth_out.as, "fastq or fasta")->check(CLI::IsMember({"fastq", "fasta"}));

    std::size_t random_length = 0;
    std::uint64_t random_count = 0;
    auto* synth_random = synth_cmd->add_subcommand("random", "Fully random control library");
    synth_random->add_option("--length", random_length, "Region length (default: the design's L)");
    synth_random->add_option("--count", random_count, "Number of reads")->required();
    synth_random->add_option("--design", synth_design, "Design file supplying flanks (default flanks otherwise)");
    synth_random->add_flag("--no-flanks", synth_no_flanks, "Emit bare regions");
    synth_random->add_option("--out,-o", synth_out.out, "Output file (default stdout)");
    synth_random->add_option("--as", synth_out.as, "fastq or fasta")->check(CLI::IsMember({"fastq", "fasta"}));

    // forge
    auto* forge_cmd = app.add_subcommand("forge", "Simulate counterfeit libraries");
    forge_cmd->require_subcommand(1);
    std::string forge_input, forge_prediction;
    std::uint64_t forge_sources = 0, forge_total = 0, forge_reads = 0;
    double forge_error = 0.0;
    LibraryOut forge_out;
    auto* forge_pcr = forge_cmd->add_subcommand("pcr", "Amplified copy of accessible reads");
    forge_pcr->add_option("--input", forge_input, "Authentic reads the forger obtained")->required();
    forge_pcr->add_option("--sources", forge_sources, "Distinct molecules the forger can access")->required();
    forge_pcr->add_option("--total", forge_total, "Reads in the forged library")->required();
    forge_pcr->add_option("--out,-o", forge_out.out, "Output file (default stdout)");
    forge_pcr->add_option("--as", forge_out.as, "fastq or fasta")->check(CLI::IsMember({"fastq", "fasta"}));
    auto* forge_pred = forge_cmd->add_subcommand("from-predicted", "Library synthesized from a predicted design");
    forge_pred->add_option("--prediction", forge_prediction, "Predicted design file")->required();
    forge_pred->add_option("--reads", forge_reads, "Number of reads")->required();
    forge_pred->add_option("--error-rate", forge_error, "Per-base substitution rate");
    forge_pred->add_option("--out,-o", forge_out.out, "Output file (default stdout)");
    forge_pred->add_option("--as", forge_out.as, "fastq or fasta")->check(CLI::IsMember({"fastq", "fasta"}));

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Filter and deduplicate sequencing reads");
    ingest_cmd->require_subcommand(1);
    std::string ingest_input, ingest_regions_out, ingest_digest_out, ingest_run_id = "run";
    ExtractArgs ingest_extract;
    auto* ingest_filter = ingest_cmd->add_subcommand("filter", "Cut design regions out of reads");
    ingest_filter->add_option("--input", ingest_input, "FASTQ/FASTA file")->required();
    ingest_filter->add_option("--regions-out", ingest_regions_out, "Write kept regions as FASTA");
    add_extract_options(ingest_filter, ingest_extract);
    auto* ingest_dedup = ingest_cmd->add_subcommand("dedup", "Duplication profile and run digest");
    ingest_dedup->add_option("--input", ingest_input, "FASTQ/FASTA file")->required();
    ingest_dedup->add_option("--digest-out", ingest_digest_out, "Write the run digest");
    ingest_dedup->add_option("--run-id", ingest_run_id, "Run identifier stored in the digest");
    add_extract_options(ingest_dedup, ingest_extract);

    // auth
    auto* auth_cmd = app.add_subcommand("auth", "Authenticate a sequencing run");
    std::string auth_design, auth_input, auth_registry, auth_batch, auth_product, auth_run_id;
    std::uint64_t auth_required = 0;
    auth::AuthOptions auth_opts;
    bool auth_no_rc = false;
    auth_cmd->add_option("--design", auth_design, "Design file")->required();
    auth_cmd->add_option("--input", auth_input, "FASTQ/FASTA file")->required();
    auth_cmd->add_option("--required-n", auth_required, "Unique regions the SC test needs (default: adjusted n)");
    auth_cmd->add_option("--epsilon", auth_opts.epsilon, "Miss probability for the default sample size");
    auth_cmd->add_option("--tau", auth_opts.tolerance, "Tolerated non-authentic rate");
    auth_cmd->add_option("--min-evidence", auth_opts.min_evidence, "SV evidence per allowed letter");
    auth_cmd->add_option("--max-mismatch", auth_opts.filter.max_flank_mismatch, "Substitutions tolerated per flank");
    auth_cmd->add_flag("--no-rc", auth_no_rc, "Do not try the reverse-complement strand");
    auth_cmd->add_option("--registry", auth_registry, "Registry file (default $POSERS_REGISTRY)");
    auth_cmd->add_option("--batch", auth_batch, "Batch id in the registry");
    auth_cmd->add_option("--product", auth_product, "Product id in the registry");
    auth_cmd->add_option("--run-id", auth_run_id, "Run identifier (default: input file name)");

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "Forger-side analyses of a library");
    attack_cmd->require_subcommand(1);
    std::string attack_input, attack_truth, attack_prediction_out, attack_baseline = "global";
    std::size_t attack_k = 20, attack_max_k = 2;
    int attack_i = 2;
    bool attack_minimal = false;
    ExtractArgs attack_extract;
    auto* attack_predict = attack_cmd->add_subcommand("predict", "Predict a design from letter frequencies");
    attack_predict->add_option("--input", attack_input, "FASTQ/FASTA file")->required();
    attack_predict->add_option("--k", attack_k, "Assumed number of restricted positions");
    attack_predict->add_option("--i", attack_i, "Assumed allowed letters per position")->check(CLI::Range(1, 3));
    attack_predict->add_option("--baseline", attack_baseline, "global or uniform")
        ->check(CLI::IsMember({"global", "uniform"}));
    attack_predict->add_option("--truth", attack_truth, "True design, to assess the prediction");
    attack_predict->add_option("--prediction-out", attack_prediction_out, "Write the prediction as a design file");
    add_extract_options(attack_predict, attack_extract);
    auto* attack_enum = attack_cmd->add_subcommand("enumerate", "Search position subsets for missing combinations");
    attack_enum->add_option("--input", attack_input, "FASTQ/FASTA file")->required();
    attack_enum->add_option("--max-k", attack_max_k, "Largest subset size");
    attack_enum->add_flag("--minimal", attack_minimal, "Skip supersets of reported subsets");
    add_extract_options(attack_enum, attack_extract);

    // registry
    auto* reg_cmd = app.add_subcommand("registry", "Batch registry for cross-run duplicate tracking");
    reg_cmd->require_subcommand(1);
    std::string reg_path, reg_batch, reg_design_ref, reg_products, reg_product, reg_digest;
    double reg_epsilon = 1e-6;
    reg_cmd->add_option("--registry", reg_path, "Registry file (default $POSERS_REGISTRY)");
    auto* reg_add = reg_cmd->add_subcommand("add", "Register a batch and its products");
    reg_add->add_option("--batch", reg_batch, "Batch id")->required();
    reg_add->add_option("--design-ref", reg_design_ref, "Design file or id used by the batch");
    reg_add->add_option("--products", reg_products, "Comma-separated product ids");
    reg_add->add_option("--epsilon", reg_epsilon, "Miss probability for the capacity warning");
    auto* reg_record = reg_cmd->add_subcommand("record-run", "Store a run digest for a product");
    reg_record->add_option("--batch", reg_batch, "Batch id")->required();
    reg_record->add_option("--product", reg_product, "Product id")->required();
    reg_record->add_option("--digest", reg_digest, "Run digest file")->required();
    auto* reg_list = reg_cmd->add_subcommand("list", "List batches");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageOrIo;
    }

    if (g.threads > 0) omp_set_num_threads(g.threads);
    const auto fmt = g.report_format();

    try {
        if (*design_new) {
            const DesignParams params{dn.length, dn.k1, dn.k2, dn.k3, dn.epsilon};
            if (fs::exists(dn.out) && !dn.force) {
                err << "error: " << dn.out << " exists (use --force to overwrite)\n";
                return kUsageOrIo;
            }
            const auto design = generate_design(params, g.seed, dn.flank5, dn.flank3);
            save_design(dn.out, design);
            if (params.k() > 0) report::render_stats(out, params, math::design_stats(dn.k1, dn.k2, dn.k3, dn.epsilon), fmt);
            if (dn.reveal) report::render_rules(out, design, fmt);
            return kOk;
        }
        if (*design_stats) {
            const auto design = load_design(stats_design);
            const auto params = params_of(design, stats_epsilon);
            report::render_stats(out, params, math::design_stats(params.k1, params.k2, params.k3, stats_epsilon), fmt);
            if (stats_reveal) report::render_rules(out, design, fmt);
            return kOk;
        }
        if (*calc_cmd) {
            DesignParams params{calc_length, calc_k1, calc_k2, calc_k3, calc_epsilon};
            if (params.length == 0) params.length = params.k();
            validate_params(params);
            report::render_stats(out, params, math::design_stats(calc_k1, calc_k2, calc_k3, calc_epsilon), fmt);
            return kOk;
        }
        if (*synth_cpol) {
            const auto design = load_design(synth_design);
            synth::SynthConfig config;
            config.total_reads = synth_reads;
            config.errors.substitution_rate = synth_error;
            config.include_flanks = !synth_no_flanks;
            config.seed = g.seed;
            if (!synth_ratios.empty()) config.ratios = parse_ratios(synth_ratios);
            const auto records = synth::synth_cpol(design, config);
            OutputFile o(synth_out.out, out);
            write_library(o.get(), records, design, config.include_flanks, synth_out.format());
            return kOk;
        }
        if (*synth_random) {
            Design design;
            design.flank5 = kDefaultFlank5;
            design.flank3 = kDefaultFlank3;
            if (!synth_design.empty()) design = load_design(synth_design);
            const std::size_t length = random_length ? random_length : design.length;
            if (length == 0) {
                err << "error: synth random needs --length or --design\n";
                return kUsageOrIo;
            }
            const auto records = synth::synth_random(length, random_count, g.seed);
            OutputFile o(synth_out.out, out);
            write_library(o.get(), records, design, !synth_no_flanks, synth_out.format());
            return kOk;
        }
        if (*forge_pcr) {
            const auto source = read_records(forge_input);
            const auto records = synth::forge_pcr(source, forge_sources, forge_total, g.seed);
            OutputFile o(forge_out.out, out);
            write_library(o.get(), records, Design{}, false, forge_out.format());
            return kOk;
        }
        if (*forge_pred) {
            const auto predicted = load_design(forge_prediction);
            const auto records =
                synth::forge_from_design(predicted, forge_reads, g.seed, synth::ErrorModel{forge_error});
            OutputFile o(forge_out.out, out);
            write_library(o.get(), records, predicted, true, forge_out.format());
            return kOk;
        }
        if (*ingest_filter || *ingest_dedup) {
            const auto design = extraction_design(ingest_extract);
            ingest::FilterReport filter;
            const auto regions = extract_regions(ingest_input, design, ingest_extract, filter);
            report::render_filter(out, filter, fmt);
            if (*ingest_filter) {
                if (!ingest_regions_out.empty()) {
                    OutputFile o(ingest_regions_out, out);
                    write_library(o.get(), synth::to_records(regions, "region"), design, false, LibraryFormat::fasta);
                }
                return kOk;
            }
            const auto deduped = ingest::dedup(regions);
            report::render_duplication(out, deduped.profile, fmt);
            if (!ingest_digest_out.empty()) {
                OutputFile o(ingest_digest_out, out);
                ingest::write_run_digest(o.get(), ingest::make_run_digest(ingest_run_id, deduped.unique, regions.size()));
            }
            return kOk;
        }
        if (*auth_cmd) {
            const auto design = load_design(auth_design);
            if (auth_required > 0) auth_opts.required_n = auth_required;
            auth_opts.filter.reverse_complement = !auth_no_rc;
            auth_opts.run_id = auth_run_id.empty() ? fs::path(auth_input).filename().string() : auth_run_id;
            auto in = open_input(auth_input);
            auto result = auth::authenticate(design, in, auth_opts);
            const auto reg = registry_path(auth_registry);
            if (!reg.empty() && !auth_product.empty()) {
                if (auth_batch.empty()) {
                    err << "error: --product needs --batch\n";
                    return kUsageOrIo;
                }
                const auto outcome = registry::registry_record_run(reg, auth_batch, auth_product, result.digest);
                auth::apply_cross_run(result, outcome.findings);
                report::render_auth(out, result, fmt);
                if (!outcome.flagged.empty()) {
                    if (fmt == report::Format::kv) {
                        for (const auto& f : outcome.flagged) out << "flagged=" << f << '\n';
                    } else {
                        out << "products flagged as counterfeit:";
                        for (const auto& f : outcome.flagged) out << ' ' << f;
                        out << '\n';
                    }
                }
            } else {
                report::render_auth(out, result, fmt);
            }
            return exit_for(result.verdict);
        }
        if (*attack_predict || *attack_enum) {
            std::optional<Design> truth;
            if (!attack_truth.empty()) {
                truth = load_design(attack_truth);
                if (attack_extract.design.empty()) attack_extract.design = attack_truth;
            }
            const auto design = extraction_design(attack_extract);
            ingest::FilterReport filter;
            const auto regions = extract_regions(attack_input, design, attack_extract, filter);
            if (*attack_predict) {
                const auto fm = attack::frequency_matrix(regions);
                const auto baseline =
                    attack_baseline == "uniform" ? attack::Baseline::uniform : attack::Baseline::global_average;
                const auto predicted = attack::predict_design(fm, attack_k, attack_i, baseline);
                report::render_prediction(out, predicted, fmt);
                if (truth) report::render_assessment(out, attack::assess_prediction(*truth, predicted), fmt);
                if (!attack_prediction_out.empty()) save_design(attack_prediction_out, attack::to_design(predicted, design));
                return kOk;
            }
            const auto unique = ingest::dedup(regions).unique;
            attack::EnumerateOptions options;
            options.minimal_only = attack_minimal;
            report::render_enumeration(out, attack::enumerate_restrictions(unique, attack_max_k, options), fmt);
            return kOk;
        }
        if (*reg_cmd) {
            const auto path = registry_path(reg_path);
            if (path.empty()) {
                err << "error: no registry given (--registry or POSERS_REGISTRY)\n";
                return kUsageOrIo;
            }
            if (*reg_add) {
                const auto entry = registry::registry_add(path, reg_batch, reg_design_ref, split_list(reg_products));
                report::render_registry(out, {entry}, fmt);
                if (!entry.design_ref.empty() && fs::exists(entry.design_ref)) {
                    const auto design = load_design(entry.design_ref);
                    const auto p = params_of(design, reg_epsilon);
                    if (p.k() > 0) {
                        const auto stats = math::design_stats(p.k1, p.k2, p.k3, reg_epsilon);
                        if (entry.products.size() > stats.capacity)
                            err << "warning: batch " << entry.batch_id << " has " << entry.products.size()
                                << " products, above the design capacity of " << stats.capacity << '\n';
                    }
                }
                return kOk;
            }
            if (*reg_record) {
                auto in = open_input(reg_digest);
                const auto digest = ingest::read_run_digest(in);
                const auto outcome = registry::registry_record_run(path, reg_batch, reg_product, digest);
                if (fmt == report::Format::kv) {
                    out << "digest=" << outcome.digest_file << "\ncross_run.count=" << outcome.findings.size() << '\n';
                    for (const auto& f : outcome.flagged) out << "flagged=" << f << '\n';
                } else {
                    out << "recorded " << outcome.digest_file << '\n';
                    for (const auto& f : outcome.findings)
                        out << "  " << f.shared << " sequences shared with " << f.other_product << " (run " << f.other_run
                            << ")\n";
                }
                return outcome.findings.empty() ? kOk : kForged;
            }
            if (*reg_list) {
                report::render_registry(out, registry::registry_list(path), fmt);
                return kOk;
            }
        }
    } catch (const GuardError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageOrIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageOrIo;
    }
    err << app.help();
    return kUsageOrIo;
}

}  // namespace posers::cli
