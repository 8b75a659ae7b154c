// Command-line front end: decompose / rip / recover / verify.
// Exit codes: 0 success (verify: consistent), 1 failed check or
// inconsistent verdict, 2 usage or input errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sparsedecomp/sparsedecomp.hpp"

namespace sd = sparsedecomp;

namespace {

void emit(const sd::json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        sd::write_file(out_path, text);
}

int run_decompose(const std::string& input, int k, double capacity,
                  const std::string& out_path) {
    const sd::Vector v = sd::load_vector_file(input);
    const double cap = capacity > 0 ? capacity : sd::default_capacity(v, k);
    const sd::Decomposition d = sd::decompose(sd::DecompositionInput(v, k, cap));
    emit(sd::decomposition_to_json(d), out_path);
    const sd::DecompositionCheck check = sd::verify_decomposition(d);
    if (!check.pass()) {
        std::cerr << "decomposition failed verification: " << check.summary() << "\n";
        return 1;
    }
    return 0;
}

int run_rip(const std::string& matrix_path, int k, int k_prime,
            const std::string& out_path) {
    const sd::Matrix phi = sd::load_matrix_file(matrix_path);
    sd::RipReport report;
    if (k_prime <= 0 || k_prime == k) {
        report = sd::rip_report(phi, k);
    } else {
        const sd::DeltaResult d = sd::delta_k(phi, k);
        const sd::ThetaResult t = sd::theta_kk(phi, k, k_prime);
        report.k = k;
        report.k_prime = k_prime;
        report.delta = d.delta;
        report.theta = t.theta;
        report.delta_witness = d.witness;
        report.theta_witness = {t.witness_t, t.witness_t_prime};
        report.condition_value = d.delta + t.theta;
        report.condition_holds = report.condition_value < 1.0;
    }
    emit(sd::rip_report_to_json(report), out_path);
    return 0;
}

int run_recover(const std::string& matrix_path, const std::string& y_path,
                const std::string& reference_path, double tol,
                const std::string& out_path) {
    const sd::Matrix phi = sd::load_matrix_file(matrix_path);
    const sd::Vector y = sd::load_vector_file(y_path);
    std::optional<sd::Vector> reference;
    if (!reference_path.empty()) reference = sd::load_vector_file(reference_path);
    const sd::RecoveryResult result = sd::recover(phi, y, reference, tol);
    emit(sd::recovery_result_to_json(result), out_path);
    if (result.has_reference && !result.exact) {
        std::cerr << "recovered vector does not match the reference within tol\n";
        return 1;
    }
    return 0;
}

int run_verify(const std::string& config_path, const std::string& report_path) {
    const sd::json cfg_json = sd::parse_json(sd::read_file(config_path), config_path);
    const sd::ExperimentConfig cfg = sd::config_from_json(cfg_json, config_path);
    const sd::ConditionVerdict verdict = sd::verify_recovery_condition(cfg);
    if (!report_path.empty())
        sd::write_file(report_path, sd::verdict_to_json(verdict).dump(2) + "\n");
    int holds = 0, exact = 0, total_signals = 0;
    for (const auto& mv : verdict.matrices) {
        if (mv.rip.condition_holds) ++holds;
        for (const auto& s : mv.signals) {
            ++total_signals;
            if (s.exact) ++exact;
        }
    }
    std::cout << "matrices: " << verdict.matrices.size() << " (condition holds for " << holds
              << "), signals recovered exactly: " << exact << "/" << total_signals
              << ", consistent: " << (verdict.consistent ? "true" : "false") << "\n";
    return verdict.consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"l1-invariant sparse decomposition, exact RIP constants, and l1 recovery"};
    app.require_subcommand(1);

    std::string dec_input, dec_out;
    int dec_k = 0;
    double dec_capacity = 0.0;
    auto* dec = app.add_subcommand("decompose",
                                   "decompose a vector into k-sparse terms");
    dec->add_option("--input", dec_input, "vector as a JSON array")->required();
    dec->add_option("--k", dec_k, "sparsity of each term")->required();
    dec->add_option("--capacity", dec_capacity, "capacity C (default: max(||v||_1, k*||v||_inf))");
    dec->add_option("--out", dec_out, "output JSON path (default: stdout)");

    std::string rip_matrix, rip_out;
    int rip_k = 0, rip_kprime = 0;
    auto* rip = app.add_subcommand("rip", "exact restricted-isometry constants");
    rip->add_option("--matrix", rip_matrix, "matrix as CSV or JSON")->required();
    rip->add_option("--k", rip_k, "support size for delta_k")->required();
    rip->add_option("--kprime", rip_kprime, "second support size for theta (default: k)");
    rip->add_option("--out", rip_out, "output JSON path (default: stdout)");

    std::string rec_matrix, rec_y, rec_ref, rec_out;
    double rec_tol = 1e-6;
    auto* rec = app.add_subcommand("recover", "l1-minimizing solution of phi x = y");
    rec->add_option("--matrix", rec_matrix, "matrix as CSV or JSON")->required();
    rec->add_option("--y", rec_y, "measurement vector as a JSON array")->required();
    rec->add_option("--reference", rec_ref, "reference vector to compare against");
    rec->add_option("--tol", rec_tol, "max-norm tolerance for exactness (default 1e-6)");
    rec->add_option("--out", rec_out, "output JSON path (default: stdout)");

    std::string ver_config, ver_report;
    auto* ver = app.add_subcommand("verify",
                                   "check the recovery condition against actual recoveries");
    ver->add_option("--config", ver_config, "experiment config JSON")->required();
    ver->add_option("--report", ver_report, "write the full report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dec->parsed()) return run_decompose(dec_input, dec_k, dec_capacity, dec_out);
        if (rip->parsed()) return run_rip(rip_matrix, rip_k, rip_kprime, rip_out);
        if (rec->parsed()) return run_recover(rec_matrix, rec_y, rec_ref, rec_tol, rec_out);
        if (ver->parsed()) return run_verify(ver_config, ver_report);
    } catch (const sd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
