#include "letf/io.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <ostream>

#include "letf/error.hpp"
#include "letf/stats.hpp"

namespace letf::io {
namespace {

Json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_paths_csv(std::ostream& out, const sim::PathBatch& batch) {
    for (std::size_t j = 0; j < batch.n_steps; ++j) out << (j ? "," : "") << "t" << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < batch.n_paths; ++i) {
        const auto row = batch.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

Json paths_summary(const sim::PathBatch& batch) {
    const SampleMoments m = sample_moments(batch.values);
    Json j;
    j["model"] = batch.model_tag;
    j["scale_note"] = batch.scale_note;
    j["seed"] = batch.seed;
    j["n_paths"] = batch.n_paths;
    j["n_steps"] = batch.n_steps;
    j["mean"] = number(m.mean);
    j["std"] = number(m.std);
    j["lag1_autocorrelation"] =
        batch.n_steps >= 2 ? number(pooled_lag1_autocorrelation(batch.values, batch.n_steps)) : Json(nullptr);
    return j;
}

Json to_json(const sim::CEReport& r) {
    Json j;
    j["model"] = r.model_tag;
    j["scale_note"] = r.scale_note;
    j["beta"] = r.beta;
    j["block"] = r.block;
    j["n_steps"] = r.n_steps;
    j["seed"] = r.seed;
    j["n_paths"] = r.n_paths;
    j["n_used"] = r.n_used;
    j["n_wiped"] = r.n_wiped;
    j["mean"] = number(r.mean);
    j["std"] = number(r.std);
    j["std_error"] = number(r.std_error);
    if (r.closed_form) {
        j["closed_form"] = number(*r.closed_form);
        j["closed_form_label"] = r.closed_form_label;
    } else {
        j["closed_form"] = nullptr;
    }
    return j;
}

Json to_json(const est::GarchFit& fit) {
    const double p[5] = {fit.params.mu, fit.params.phi, fit.params.omega, fit.params.alpha, fit.params.beta_g};
    Json params = Json::object();
    Json ses = Json::object();
    for (std::size_t k = 0; k < 5; ++k) {
        params[est::kGarchParamNames[k]] = number(p[k]);
        ses[est::kGarchParamNames[k]] = number(fit.std_errors[k]);
    }
    Json j;
    j["model"] = "ar1-garch11";
    j["scale"] = est::to_string(fit.scale);
    j["params"] = params;
    j["std_errors"] = ses;
    j["loglik"] = number(fit.loglik);
    j["n_obs"] = fit.n_obs;
    j["converged"] = fit.converged;
    j["persistence"] = number(fit.params.persistence());
    j["iterations"] = fit.iterations;
    j["message"] = fit.message;
    return j;
}

Json to_json(const est::Ar1Fit& fit) {
    Json j;
    j["model"] = "ar1";
    j["scale"] = "decimal";
    j["params"] = {{"intercept", number(fit.params.intercept)},
                   {"phi", number(fit.params.phi)},
                   {"sigma", number(fit.params.sigma_eps)}};
    j["std_errors"] = {{"intercept", number(fit.intercept_se)}, {"phi", number(fit.phi_se)}};
    j["n_obs"] = fit.n_obs;
    j["converged"] = true;
    return j;
}

void write_ce_table_csv(std::ostream& out, const emp::CETable& t) {
    const std::string mode = emp::to_string(t.mode);
    out << "regime,start,end,mode";
    for (int b : t.betas) out << ',' << mode << "_beta_" << b;
    out << '\n';
    for (std::size_t w = 0; w < t.windows.size(); ++w) {
        const auto& win = t.windows[w];
        out << win.label << ',' << format_iso_date(win.start) << ',' << format_iso_date(win.end) << ',' << mode;
        for (const emp::CECell& c : t.cells[w]) out << ',' << (c.ce ? format_double(*c.ce) : kAbsent);
        out << '\n';
    }
}

void write_rolling_csv(std::ostream& out, std::span<const RollingPoint> points) {
    const bool dated = !points.empty() && points.front().date.has_value();
    out << (dated ? "date" : "index") << ",value\n";
    for (const RollingPoint& p : points) {
        if (dated)
            out << format_iso_date(*p.date);
        else
            out << p.end_index;
        out << ',' << format_double(p.value) << '\n';
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw_config("output-unwritable", "cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw_config("output-unwritable", "failed writing " + path.string());
}

}  // namespace letf::io
