#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "fixtures.hpp"

using namespace testutil;

namespace {

const std::string kCli = ENGAGE_CLI_PATH;

std::string quoted(const std::filesystem::path& path) {
    return "'" + path.string() + "'";
}

// two-topic fixture matching the closed-form hand computation
void write_two_topic(const std::filesystem::path& dir) {
    write_file(dir / "topics.csv",
               "topic_id,creation_date,display_name\n"
               "A,2021-01-04,Topic A\n"
               "B,2021-01-06,Topic B\n");
    write_file(dir / "users.csv",
               "user_id,follower_count,bot_probability\n"
               "ua,1000,0.2\n"
               "ub,500,0.6\n");
    std::string posts = "topic_id,user_id,timestamp,likes,retweets\n";
    posts += "A,ua,2021-01-05T00:00:00Z,40,12\n";
    for (int k = 0; k < 9; ++k) posts += "A,ua,2021-01-05T01:00:00Z,0,0\n";
    posts += "B,ub,2021-01-07T00:00:00Z,5,3\n";
    for (int k = 0; k < 3; ++k) posts += "B,ub,2021-01-07T01:00:00Z,0,0\n";
    write_file(dir / "posts.csv", posts);
    write_file(dir / "prices.csv",
               "topic_id,date,price\n"
               "A,2021-02-03,100\n"
               "A,2021-03-05,110\n"
               "B,2021-02-05,50\n"
               "B,2021-03-07,45\n");
}

// six topics, five users, deterministic monotone universe with prices
void write_rich(const std::filesystem::path& dir) {
    std::string topics = "topic_id,creation_date,display_name\n";
    std::string prices = "topic_id,date,price\n";
    for (int t = 0; t < 6; ++t) {
        const engage::Date creation = date("2021-01-04").plus_days(7 * t);
        const std::string id = "T" + std::to_string(t + 1);
        topics += id + "," + creation.str() + "," + id + "\n";
        const double rate = 0.002 * (t - 2.5);
        double price = 100.0;
        for (int day = 0; day <= 420; day += 7) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10f", price);
            prices += id + "," + creation.plus_days(day).str() + "," + buf + "\n";
            price *= 1.0 + rate * 7.0;
        }
    }
    write_file(dir / "topics.csv", topics);
    write_file(dir / "prices.csv", prices);
    write_file(dir / "users.csv",
               "user_id,follower_count,bot_probability\n"
               "u1,100,0.15\n"
               "u2,1000,0.35\n"
               "u3,5000,0.55\n"
               "u4,20000,0.75\n"
               "u5,800,\n");
    std::string posts = "topic_id,user_id,timestamp,likes,retweets,replies\n";
    for (int t = 0; t < 6; ++t) {
        const engage::Date creation = date("2021-01-04").plus_days(7 * t);
        const std::string id = "T" + std::to_string(t + 1);
        // posting users differ per topic so bot-probability means do too
        const int posters = std::min(5, t + 1);
        for (int u = 1; u <= posters; ++u) {
            for (int p = 0; p < 2; ++p) {
                const auto when =
                    engage::Timestamp::from_date(creation).plus_days(1 + p);
                posts += id + ",u" + std::to_string(u) + "," + when.str() +
                         "," + std::to_string((t + 1) * (6 - u)) + "," +
                         std::to_string(t) + "," + std::to_string(1) + "\n";
            }
        }
    }
    write_file(dir / "posts.csv", posts);
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (const char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

}  // namespace

TEST_CASE("validate accepts a good corpus and echoes its config") {
    TempDir dir;
    write_two_topic(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(kCli + " validate --corpus " +
                                    quoted(dir.path() / "corpus") + " --out " +
                                    quoted(out));
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("corpus ok") != std::string::npos);
    CHECK(std::filesystem::exists(out / "validation.json"));
    CHECK(std::filesystem::exists(out / "run_config.json"));
    const std::string config = read_file(out / "run_config.json");
    CHECK(config.find("\"seed\": 0") != std::string::npos);
    CHECK(config.find("\"subcommand\": \"validate\"") != std::string::npos);
}

TEST_CASE("validate reports corrupt rows with file and line") {
    TempDir dir;
    write_two_topic(dir.path() / "corpus");
    write_file(dir.path() / "corpus" / "posts.csv",
               "topic_id,user_id,timestamp,likes,retweets\n"
               "A,ua,2021-01-05T00:00:00Z,4,1\n"
               "A,ua,2021-01-05T00:00:00Z,-4,1\n");
    const auto result = run_command(kCli + " validate --corpus " +
                                    quoted(dir.path() / "corpus") + " --out " +
                                    quoted(dir.path() / "out"));
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("posts.csv") != std::string::npos);
    CHECK(result.output.find("3") != std::string::npos);  // the bad row
    const std::string error = read_file(dir.path() / "out" / "error.json");
    CHECK(error.find("\"type\": \"corpus\"") != std::string::npos);
    CHECK(error.find("\"row\": 3") != std::string::npos);
}

TEST_CASE("fit writes the model with the expected coefficients") {
    TempDir dir;
    write_two_topic(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " fit --corpus " + quoted(dir.path() / "corpus") + " --out " +
        quoted(out) + " --kinds like,retweet --reference-kind like");
    CHECK(result.exit_code == 0);
    const std::string model = read_file(out / "model.json");
    CHECK(model.find("\"retweet\": 0.33333333333333331") != std::string::npos);
    CHECK(model.find("\"like\": 1") != std::string::npos);
    // 52*45/(10000*60) and 8*45/(2000*60)
    CHECK(model.find("\"A\": 0.0038999999999999998") != std::string::npos);
    CHECK(model.find("\"B\": 0.0030000000000000001") != std::string::npos);
    CHECK(std::filesystem::exists(out / "fit_report.json"));
}

TEST_CASE("fit runs are byte-identical") {
    TempDir dir;
    write_two_topic(dir.path() / "corpus");
    for (const char* name : {"out1", "out2"}) {
        const auto result = run_command(kCli + " fit --corpus " +
                                        quoted(dir.path() / "corpus") +
                                        " --out " + quoted(dir.path() / name));
        REQUIRE(result.exit_code == 0);
    }
    CHECK(read_file(dir.path() / "out1" / "model.json") ==
          read_file(dir.path() / "out2" / "model.json"));
    CHECK(read_file(dir.path() / "out1" / "fit_report.json") ==
          read_file(dir.path() / "out2" / "fit_report.json"));
}

TEST_CASE("fit in prior-data mode writes one model per topic") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result =
        run_command(kCli + " fit --corpus " + quoted(dir.path() / "corpus") +
                    " --out " + quoted(out) + " --mode prior_data");
    CHECK(result.exit_code == 0);
    for (int t = 1; t <= 6; ++t) {
        CHECK(std::filesystem::exists(out / "models" /
                                      ("T" + std::to_string(t) + ".json")));
    }
    const std::string report = read_file(out / "fit_report.json");
    CHECK(report.find("\"mode\": \"prior_data\"") != std::string::npos);
}

TEST_CASE("features subcommand emits the feature table") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result =
        run_command(kCli + " features --corpus " + quoted(dir.path() / "corpus") +
                    " --out " + quoted(out));
    CHECK(result.exit_code == 0);
    const std::string features = read_file(out / "features.csv");
    CHECK(count_lines(features) == 7);  // header + 6 topics
    CHECK(features.find("topic_id,creation_date,engagement_coefficient,"
                        "tweet_volume,mean_bot_probability,estimation_mode,"
                        "manipulation_flag") == 0);
    CHECK(features.find(",in_sample,") != std::string::npos);
}

TEST_CASE("evaluate emits dependence and cluster curves") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " evaluate --corpus " + quoted(dir.path() / "corpus") +
        " --out " + quoted(out) + " --horizons 1..3");
    CHECK(result.exit_code == 0);
    const std::string dependence = read_file(out / "dependence.csv");
    // header + 3 features x 3 horizons
    CHECK(count_lines(dependence) == 10);
    CHECK(dependence.find("feature,horizon_months,abs_spearman,auc,n_topics") == 0);
    CHECK(dependence.find("engagement,1,") != std::string::npos);
    CHECK(dependence.find("volume,3,") != std::string::npos);
    CHECK(dependence.find("bot_probability,2,") != std::string::npos);
    CHECK(dependence.find(",4,") == std::string::npos);  // horizon capped

    const std::string clusters = read_file(out / "cluster_returns.csv");
    CHECK(clusters.find("cluster,center,horizon_months,median_return,n_topics") == 0);
    CHECK(count_lines(clusters) == 10);  // header + 3 clusters x 3 horizons

    CHECK(std::filesystem::exists(out / "run_summary.json"));
}

TEST_CASE("backtest emits portfolio and trade files") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " backtest --corpus " + quoted(dir.path() / "corpus") +
        " --out " + quoted(out) + " --horizons 1..2");
    CHECK(result.exit_code == 0);
    const std::string backtest = read_file(out / "backtest.csv");
    // header + 3 features x 5 thresholds x 2 horizons
    CHECK(count_lines(backtest) == 31);
    const std::string trades = read_file(out / "trades.csv");
    CHECK(trades.find("feature,threshold,holding_months,investment_date,"
                      "topic_id,buy_date,sell_date,percent_return") == 0);
    CHECK(count_lines(trades) > 1);
}

TEST_CASE("backtest accepts historical investment dates") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " backtest --corpus " + quoted(dir.path() / "corpus") +
        " --out " + quoted(out) +
        " --horizons 1 --investment-dates 2021-02-20");
    CHECK(result.exit_code == 0);
    const std::string backtest = read_file(out / "backtest.csv");
    CHECK(backtest.find(",2021-02-20,") != std::string::npos);
}

TEST_CASE("pipeline produces the full report set") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " pipeline --corpus " + quoted(dir.path() / "corpus") +
        " --out " + quoted(out) + " --horizons 1..2");
    CHECK(result.exit_code == 0);
    for (const char* name : {"features.csv", "dependence.csv",
                             "cluster_returns.csv", "backtest.csv",
                             "trades.csv", "run_summary.json",
                             "run_config.json"}) {
        CHECK_MESSAGE(std::filesystem::exists(out / name), name);
    }
    const std::string summary = read_file(out / "run_summary.json");
    CHECK(summary.find("\"topics\": 6") != std::string::npos);
    CHECK(summary.find("\"users\": 5") != std::string::npos);
}

TEST_CASE("pipeline without bot probabilities skips cluster returns") {
    TempDir dir;
    write_rich(dir.path() / "corpus");
    write_file(dir.path() / "corpus" / "users.csv",
               "user_id,follower_count\n"
               "u1,100\nu2,1000\nu3,5000\nu4,20000\nu5,800\n");
    const auto out = dir.path() / "out";
    const auto result = run_command(
        kCli + " pipeline --corpus " + quoted(dir.path() / "corpus") +
        " --out " + quoted(out) + " --horizons 1");
    CHECK(result.exit_code == 0);
    CHECK(!std::filesystem::exists(out / "cluster_returns.csv"));
    const std::string summary = read_file(out / "run_summary.json");
    CHECK(summary.find("cluster_returns.csv skipped") != std::string::npos);
}

TEST_CASE("simulate is deterministic per seed") {
    TempDir dir;
    for (const char* name : {"c1", "c2"}) {
        const auto result = run_command(
            kCli + " simulate --out " + quoted(dir.path() / name) +
            " --topics 4 --seed 11 --bot-probabilities --posts-per-topic 50");
        REQUIRE(result.exit_code == 0);
    }
    for (const char* file : {"topics.csv", "users.csv", "posts.csv",
                             "prices.csv", "truth.json"}) {
        CHECK_MESSAGE(read_file(dir.path() / "c1" / file) ==
                          read_file(dir.path() / "c2" / file),
                      file);
    }
    const auto other = run_command(
        kCli + " simulate --out " + quoted(dir.path() / "c3") +
        " --topics 4 --seed 12 --bot-probabilities --posts-per-topic 50");
    REQUIRE(other.exit_code == 0);
    CHECK(read_file(dir.path() / "c1" / "posts.csv") !=
          read_file(dir.path() / "c3" / "posts.csv"));
}

TEST_CASE("simulate with zero alpha yields an interaction-free corpus") {
    TempDir dir;
    const auto result = run_command(
        kCli + " simulate --out " + quoted(dir.path() / "c") +
        " --alpha 0,0 --posts-per-topic 40 --users 10");
    REQUIRE(result.exit_code == 0);
    const std::string posts = read_file(dir.path() / "c" / "posts.csv");
    // every count column is zero
    std::istringstream lines(posts);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto tail = line.substr(line.size() - 6);
        CHECK(tail == ",0,0,0");
    }
    CHECK(rows == 80);
}

TEST_CASE("simulate round trips through fit") {
    TempDir dir;
    const auto corpus = dir.path() / "corpus";
    auto result = run_command(
        kCli + " simulate --out " + quoted(corpus) +
        " --topics 3 --users 200 --posts-per-topic 2000 --seed 5");
    REQUIRE(result.exit_code == 0);
    const auto out = dir.path() / "fit";
    result = run_command(kCli + " fit --corpus " + quoted(corpus) + " --out " +
                         quoted(out));
    REQUIRE(result.exit_code == 0);
    // planted betas are all 1
    const std::string model = read_file(out / "model.json");
    const auto beta_at = [&](const std::string& kind) {
        const auto pos = model.find("\"" + kind + "\": ");
        REQUIRE(pos != std::string::npos);
        return std::strtod(model.c_str() + pos + kind.size() + 4, nullptr);
    };
    CHECK(std::fabs(beta_at("retweet") - 1.0) < 0.1);
    CHECK(std::fabs(beta_at("reply") - 1.0) < 0.1);
}

TEST_CASE("simulate accepts a JSON spec file") {
    TempDir dir;
    const auto spec = dir.path() / "spec.json";
    write_file(spec,
               "{\n"
               "  \"n_topics\": 3,\n"
               "  \"users\": {\"count\": 20, \"bot_probabilities\": true},\n"
               "  \"posts_per_topic\": 30,\n"
               "  \"price_mode\": \"alpha_linked\"\n"
               "}\n");
    const auto result = run_command(
        kCli + " simulate --spec " + quoted(spec) + " --out " +
        quoted(dir.path() / "c") + " --seed 2");
    REQUIRE(result.exit_code == 0);
    const std::string topics = read_file(dir.path() / "c" / "topics.csv");
    CHECK(count_lines(topics) == 4);
    const std::string users = read_file(dir.path() / "c" / "users.csv");
    CHECK(users.find("bot_probability") != std::string::npos);
    CHECK(count_lines(users) == 21);
}

TEST_CASE("bad invocations exit nonzero") {
    TempDir dir;
    CHECK(run_command(kCli + " frobnicate").exit_code != 0);
    CHECK(run_command(kCli).exit_code != 0);
    CHECK(run_command(kCli + " fit --out " + quoted(dir.path() / "out"))
              .exit_code != 0);  // missing --corpus
    write_two_topic(dir.path() / "corpus");
    CHECK(run_command(kCli + " fit --corpus " + quoted(dir.path() / "corpus") +
                      " --out " + quoted(dir.path() / "out") +
                      " --mode bogus")
              .exit_code != 0);
    CHECK(run_command(kCli + " fit --corpus " + quoted(dir.path() / "corpus") +
                      " --out " + quoted(dir.path() / "out") +
                      " --reference-kind share")
              .exit_code != 0);
}

TEST_CASE("missing corpus directory is a clean error") {
    TempDir dir;
    const auto result = run_command(
        kCli + " validate --corpus " + quoted(dir.path() / "nowhere") +
        " --out " + quoted(dir.path() / "out"));
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("error") != std::string::npos);
    CHECK(std::filesystem::exists(dir.path() / "out" / "error.json"));
}
