// Exercises the shared library through its C header only.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "ofqn/ofqn.h"

namespace {

const double kMuL = 1.0 / 9.8e-6;
const double kMuC = 1.0 / 240e-6;

std::string render(const ofqn_table* t, ofqn_format f) {
    size_t len = 0;
    REQUIRE(ofqn_table_render(t, f, nullptr, 0, &len) == OFQN_OK);
    std::string s(len + 1, '\0');
    REQUIRE(ofqn_table_render(t, f, s.data(), s.size(), &len) == OFQN_OK);
    s.resize(len);
    return s;
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(ofqn_version()) == "1.0.0");
    CHECK(std::string(ofqn_status_name(OFQN_OK)) == "ok");
    CHECK(std::string(ofqn_status_name(OFQN_ERR_UNSTABLE)) == "unstable");
}

TEST_CASE("analytic calls and error codes") {
    double qj = 0.0;
    CHECK(ofqn_derive_q_jack(1.0, &qj) == OFQN_OK);
    CHECK(qj == 0.5);
    CHECK(ofqn_derive_q_jack(1.5, &qj) == OFQN_ERR_DOMAIN);
    CHECK(std::string(ofqn_last_error()).find("q_nf") != std::string::npos);
    CHECK(ofqn_derive_q_jack(0.5, nullptr) == OFQN_ERR_NULL);

    const ofqn_node_params node{2000.0, kMuL, 1.0};
    ofqn_solved_rates r{};
    CHECK(ofqn_solve_rates(&node, 4175.0, &r) == OFQN_OK);
    CHECK(r.stable == 1);
    CHECK(r.rho_controller == doctest::Approx(2000.0 / 4175.0));
    CHECK(ofqn_solve_rates(nullptr, 4175.0, &r) == OFQN_ERR_NULL);

    double w = 0.0, wj = 0.0;
    CHECK(ofqn_mean_sojourn_openflow(&node, 4175.0, &w) == OFQN_OK);
    CHECK(ofqn_mean_sojourn_jackson(&node, 4175.0, &wj) == OFQN_OK);
    CHECK(w == doctest::Approx(wj).epsilon(1e-12));
    CHECK(ofqn_mean_sojourn_naive_jackson(&node, 4175.0, &w) == OFQN_ERR_UNDEFINED);

    const ofqn_node_params saturated{10000.0, kMuL, 0.5};
    CHECK(ofqn_solve_rates(&saturated, kMuC, &r) == OFQN_OK);
    CHECK(r.stable == 0);
    CHECK(ofqn_mean_sojourn_openflow(&saturated, kMuC, &w) == OFQN_ERR_UNSTABLE);
    CHECK(std::string(ofqn_last_unstable_station()) == "controller");
}

TEST_CASE("chain handle") {
    ofqn_chain* chain = nullptr;
    REQUIRE(ofqn_chain_create(kMuC, &chain) == OFQN_OK);
    CHECK(ofqn_chain_size(chain) == 0);
    const ofqn_node_params a{2000.0, kMuL, 0.2}, b{2000.0, kMuL, 0.2};
    CHECK(ofqn_chain_add_node(chain, &a) == OFQN_OK);
    CHECK(ofqn_chain_add_node(chain, &b) == OFQN_OK);
    CHECK(ofqn_chain_size(chain) == 2);

    ofqn_solved_rates r{};
    CHECK(ofqn_chain_solve(chain, 1, &r) == OFQN_OK);
    CHECK(r.q_jack == doctest::Approx(0.2 * 2000.0 / (2000.0 + 2000.0 * 1.2)).epsilon(1e-12));
    CHECK(ofqn_chain_solve(chain, 2, &r) == OFQN_ERR_RANGE);

    double per_class[2] = {0.0, 0.0};
    double aggregate = 0.0;
    CHECK(ofqn_chain_sojourn(chain, per_class, 1, &aggregate) == OFQN_ERR_RANGE);
    CHECK(ofqn_chain_sojourn(chain, per_class, 2, &aggregate) == OFQN_OK);
    CHECK(aggregate == doctest::Approx(0.5 * (per_class[0] + per_class[1])).epsilon(1e-12));
    CHECK(per_class[0] > per_class[1]);

    ofqn_sim_config cfg;
    ofqn_sim_config_default(&cfg);
    cfg.packets_per_replication = 10000;
    cfg.replications = 3;
    ofqn_sim_result* res = nullptr;
    REQUIRE(ofqn_simulate_chain(chain, &cfg, &res) == OFQN_OK);
    CHECK(ofqn_sim_result_classes(res) == 2);
    ofqn_sim_summary s{};
    CHECK(ofqn_sim_result_summary(res, 1, &s) == OFQN_OK);
    CHECK(ofqn_sim_result_summary(res, 2, &s) == OFQN_ERR_RANGE);
    CHECK(ofqn_sim_result_summary(res, static_cast<size_t>(-1), &s) == OFQN_OK);
    CHECK(s.packets == 3u * 9000u);
    ofqn_sim_result_destroy(res);
    ofqn_chain_destroy(chain);
    ofqn_chain_destroy(nullptr);
}

TEST_CASE("distribution handle and tables") {
    const ofqn_node_params node{2000.0, kMuL, 0.5};
    ofqn_distribution* dist = nullptr;
    REQUIRE(ofqn_distribution_create(&node, kMuC, &dist) == OFQN_OK);
    ofqn_distribution_info info{};
    CHECK(ofqn_distribution_info_get(dist, &info) == OFQN_OK);
    CHECK(info.b1 + info.b2 + info.d == doctest::Approx(1.0).epsilon(1e-12));
    double c = 0.0, p = 0.0, t = 0.0;
    CHECK(ofqn_distribution_ccdf(dist, 0.0, &c) == OFQN_OK);
    CHECK(c == 1.0);
    CHECK(ofqn_distribution_quantile(dist, 0.9, &t) == OFQN_OK);
    CHECK(ofqn_distribution_prob_within(dist, t, &p) == OFQN_OK);
    CHECK(p == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(ofqn_distribution_pdf(dist, -1.0, &p) == OFQN_ERR_DOMAIN);

    ofqn_table* table = nullptr;
    REQUIRE(ofqn_distribution_table(dist, 5, 0.0, &table) == OFQN_OK);
    CHECK(ofqn_table_rows(table) == 5);
    CHECK(ofqn_table_columns(table) == 4);
    CHECK(std::string(ofqn_table_column_name(table, 2)) == "ccdf");
    CHECK(ofqn_table_column_name(table, 4) == nullptr);
    double v = 0.0;
    CHECK(ofqn_table_number(table, 0, 2, &v) == OFQN_OK);
    CHECK(v == 1.0);
    CHECK(ofqn_table_number(table, 5, 0, &v) == OFQN_ERR_RANGE);

    const std::string csv = render(table, OFQN_FORMAT_CSV);
    CHECK(csv.rfind("t,pdf,ccdf,cdf\r\n", 0) == 0);
    char tiny[4];
    size_t len = 0;
    CHECK(ofqn_table_render(table, OFQN_FORMAT_CSV, tiny, sizeof tiny, &len) == OFQN_ERR_RANGE);
    CHECK(len == csv.size());
    ofqn_table_destroy(table);

    const ofqn_node_params bad{10000.0, kMuL, 0.5};
    ofqn_distribution* none = nullptr;
    CHECK(ofqn_distribution_create(&bad, kMuC, &none) == OFQN_ERR_UNSTABLE);
    CHECK(none == nullptr);
    ofqn_distribution_destroy(dist);
}

TEST_CASE("building a table by hand") {
    const char* cols[] = {"name", "value"};
    ofqn_table* t = nullptr;
    REQUIRE(ofqn_table_create(cols, 2, &t) == OFQN_OK);
    size_t row = 99;
    CHECK(ofqn_table_append_row(t, &row) == OFQN_OK);
    CHECK(row == 0);
    CHECK(ofqn_table_set_text(t, 0, 0, "a,b") == OFQN_OK);
    CHECK(ofqn_table_set_number(t, 0, 1, 0.25) == OFQN_OK);
    CHECK(ofqn_table_set_number(t, 0, 2, 1.0) == OFQN_ERR_RANGE);
    CHECK(ofqn_table_set_number(t, 1, 0, 1.0) == OFQN_ERR_RANGE);
    CHECK(ofqn_table_set_text(t, 0, 0, nullptr) == OFQN_ERR_NULL);
    CHECK(render(t, OFQN_FORMAT_CSV) == "name,value\r\n\"a,b\",0.25\r\n");
    ofqn_table_destroy(t);
    const char* holes[] = {"x", nullptr};
    CHECK(ofqn_table_create(holes, 2, &t) == OFQN_ERR_NULL);
}

TEST_CASE("simulation, throughput and sweep through the C API") {
    const ofqn_node_params node{0.5 * kMuL, kMuL, 0.0};
    ofqn_sim_config cfg;
    ofqn_sim_config_default(&cfg);
    CHECK(cfg.replications == 5);
    CHECK(cfg.packets_per_replication == 200000);
    cfg.packets_per_replication = 20000;
    ofqn_sim_result* res = nullptr;
    REQUIRE(ofqn_simulate_node(&node, kMuC, &cfg, &res) == OFQN_OK);
    CHECK(ofqn_sim_result_max_controller_visits(res) == 0);
    double means[8];
    size_t count = 0;
    CHECK(ofqn_sim_result_replication_means(res, static_cast<size_t>(-1), means, 8, &count) == OFQN_OK);
    CHECK(count == 5);
    size_t n = 0;
    CHECK(ofqn_sim_result_samples(res, nullptr, 0, &n) == OFQN_OK);
    CHECK(n == ofqn_sim_result_sample_count(res));
    double ccdf0 = 0.0;
    CHECK(ofqn_sim_result_empirical_ccdf(res, 0.0, &ccdf0) == OFQN_OK);
    CHECK(ccdf0 == 1.0);
    ofqn_sim_result_destroy(res);

    cfg.replications = 1;
    CHECK(ofqn_simulate_node(&node, kMuC, &cfg, &res) == OFQN_ERR_DOMAIN);

    ofqn_throughput tp{};
    CHECK(ofqn_max_throughput(19.6e-6, kMuL, 0.0, kMuC, &tp) == OFQN_OK);
    CHECK(tp.lambda == doctest::Approx(kMuL / 2.0).epsilon(1e-9));
    CHECK(tp.feasible == 1);

    const double grid[] = {0.2, 0.4};
    ofqn_sweep_spec spec{};
    spec.variable = OFQN_SWEEP_RHO_CONTROLLER;
    spec.grid = grid;
    spec.grid_size = 2;
    spec.mu_switch = kMuL;
    spec.q_nf = 0.5;
    spec.mu_controller = kMuC;
    spec.deadline = 0.5e-3;
    spec.outputs = OFQN_OUT_ANALYTIC_MEAN | OFQN_OUT_DEADLINE_PROB;
    ofqn_sim_config_default(&spec.sim);
    ofqn_table* t = nullptr;
    REQUIRE(ofqn_sweep(&spec, &t) == OFQN_OK);
    CHECK(render(t, OFQN_FORMAT_CSV).rfind("rho_controller,lambda,status,analytic_mean,deadline_prob,notes\r\n", 0) ==
          0);
    ofqn_table_destroy(t);
    spec.q_nf = 0.0;
    CHECK(ofqn_sweep(&spec, &t) == OFQN_ERR_DOMAIN);
    spec.grid = nullptr;
    CHECK(ofqn_sweep(&spec, &t) == OFQN_ERR_NULL);
}

TEST_CASE("figures through the C API") {
    ofqn_figure_options opts;
    ofqn_figure_options_default(&opts);
    CHECK(opts.mu_switch == doctest::Approx(kMuL));
    CHECK(opts.simulate == 1);
    opts.simulate = 0;
    ofqn_table* t = nullptr;
    REQUIRE(ofqn_figure("fig6", &opts, &t) == OFQN_OK);
    CHECK(std::string(ofqn_table_column_name(t, 1)) == "p_within_0.5ms_q0.2");
    ofqn_table_destroy(t);
    CHECK(ofqn_figure("nope", &opts, &t) == OFQN_ERR_DOMAIN);

    const std::string path = "capi_fig4_test.csv";
    REQUIRE(ofqn_figure("fig4", &opts, &t) == OFQN_OK);
    CHECK(ofqn_table_write_file(t, OFQN_FORMAT_CSV, path.c_str()) == OFQN_OK);
    CHECK(ofqn_table_write_file(t, OFQN_FORMAT_CSV, "/nonexistent/dir/x.csv") == OFQN_ERR_IO);
    std::FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string head(12, '\0');
    CHECK(std::fread(head.data(), 1, head.size(), f) == head.size());
    std::fclose(f);
    std::remove(path.c_str());
    CHECK(head == "delay_bound,");
    ofqn_table_destroy(t);
}

TEST_CASE("validation through the C API, including the mutation check") {
    ofqn_validation_options opts;
    ofqn_validation_options_default(&opts);
    const int ids[] = {1, 2};
    opts.only = ids;
    opts.only_count = 2;

    int callbacks = 0;
    auto count = [](int, const char*, int, const char*, void* user) { ++*static_cast<int*>(user); };
    ofqn_validation_report* rep = nullptr;
    REQUIRE(ofqn_validate(&opts, count, &callbacks, &rep) == OFQN_OK);
    CHECK(callbacks == 2);
    CHECK(ofqn_validation_report_size(rep) == 2);
    CHECK(ofqn_validation_report_all_passed(rep) == 1);
    CHECK(std::string(ofqn_validation_report_line(rep, 0)).rfind("PASS", 0) == 0);
    CHECK(ofqn_validation_report_line(rep, 2) == nullptr);
    ofqn_validation_report_destroy(rep);

    opts.q_jack_perturbation = 0.01;
    REQUIRE(ofqn_validate(&opts, nullptr, nullptr, &rep) == OFQN_OK);
    CHECK(ofqn_validation_report_all_passed(rep) == 0);
    CHECK(ofqn_validation_report_passed(rep, 0) == 0);
    CHECK(ofqn_validation_report_passed(rep, 1) == 0);
    ofqn_validation_report_destroy(rep);
}
