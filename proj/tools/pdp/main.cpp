// pdp: operator frontend for the paired-distance honeyword system.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pdp/adversary.hpp"
#include "pdp/config.hpp"
#include "pdp/error.hpp"
#include "pdp/federation.hpp"
#include "pdp/honeychecker.hpp"
#include "pdp/meter.hpp"
#include "pdp/storage.hpp"
#include "pdp/vault.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDenied = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAlarm = 3;

std::uint64_t seed_or_random(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void print_metric(std::ostream& out, std::string_view name, double value, double ci) {
  out << "metric=" << name << " value=" << std::setprecision(10) << value << " ci=" << ci << "\n";
}

/// Checker reached either over TCP or through a snapshot file next to F.
struct CheckerHandle {
  std::unique_ptr<pdp::checker::CheckerStore> store;
  std::unique_ptr<pdp::checker::CheckerClient> client;
  std::optional<std::filesystem::path> snapshot;

  void flush() const {
    if (store && snapshot) store->save(*snapshot);
  }
};

CheckerHandle open_checker(const std::string& endpoint, const std::filesystem::path& file) {
  CheckerHandle h;
  if (!endpoint.empty()) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos) throw pdp::FormatError("--checker expects HOST:PORT");
    const auto port = std::stoul(endpoint.substr(colon + 1));
    h.client = std::make_unique<pdp::checker::RemoteChecker>(endpoint.substr(0, colon),
                                                             static_cast<std::uint16_t>(port));
    return h;
  }
  h.store = std::make_unique<pdp::checker::CheckerStore>();
  h.snapshot = file;
  h.snapshot->replace_extension(file.extension().string() + ".checker");
  if (std::filesystem::exists(*h.snapshot)) h.store->load(*h.snapshot);
  h.client = std::make_unique<pdp::checker::LocalChecker>(*h.store);
  return h;
}

void append_audit(const std::filesystem::path& file, std::string_view line) {
  auto path = file;
  path.replace_extension(file.extension().string() + ".audit");
  std::ofstream out(path, std::ios::app);
  out << line << "\n";
}

struct CommonFileOptions {
  std::string file;
  std::string checker;
};

void add_file_options(CLI::App* cmd, CommonFileOptions& o) {
  cmd->add_option("--file,-f", o.file, "Password file F")->required();
  cmd->add_option("--checker", o.checker,
                  "Honeychecker HOST:PORT (default: snapshot file <F>.checker)");
}

sigset_t termination_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  return set;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paired distance protocol: honey circular list, distance chains, honeychecker"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (default: $PDP_CONFIG)");

  // gen-hcl
  auto* gen = app.add_subcommand("gen-hcl", "Generate a honey circular list");
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::size_t> gen_size;
  std::string gen_init;
  gen->add_option("--seed", gen_seed, "Deterministic seed");
  gen->add_option("--size", gen_size, "Ring size (default 36)")->check(CLI::Range(2, 36));
  gen->add_option("--init", gen_init, "Also create an empty password file F with this ring");

  // register
  auto* reg = app.add_subcommand("register", "Register a user");
  CommonFileOptions reg_files;
  add_file_options(reg, reg_files);
  std::string reg_user, reg_password, reg_rs, reg_wordlist;
  std::optional<std::uint64_t> reg_seed;
  reg->add_option("--user,-u", reg_user)->required();
  reg->add_option("--password,-p", reg_password)->required();
  reg->add_option("--rs", reg_rs, "Random string")->required();
  reg->add_option("--wordlist", reg_wordlist, "Wordlist for the RS meter");
  reg->add_option("--seed", reg_seed, "Deterministic salt seed (testing only)");

  // login
  auto* login = app.add_subcommand("login", "Attempt a login");
  CommonFileOptions login_files;
  add_file_options(login, login_files);
  std::string login_user, login_password, login_rs;
  login->add_option("--user,-u", login_user)->required();
  login->add_option("--password,-p", login_password)->required();
  login->add_option("--rs", login_rs, "Random string")->required();

  // checker serve
  auto* checker = app.add_subcommand("checker", "Honeychecker service");
  checker->require_subcommand(1);
  auto* serve = checker->add_subcommand("serve", "Serve the line protocol over TCP");
  std::uint16_t serve_port = 7878;
  std::string serve_bind = "127.0.0.1", serve_snapshot;
  serve->add_option("--port", serve_port, "TCP port (0 = ephemeral)");
  serve->add_option("--bind", serve_bind, "Bind address");
  serve->add_option("--snapshot", serve_snapshot, "Snapshot file loaded at start, rewritten on change");

  // federate
  auto* fed = app.add_subcommand("federate", "Simulate a federation and its rekey protocol");
  std::size_t fed_nodes = 3, fed_users = 100, fed_epochs = 1;
  std::optional<std::uint64_t> fed_seed, fed_threshold;
  std::string fed_schedule = "fifo", fed_out;
  fed->add_option("--nodes,-m", fed_nodes, "Number of systems")->check(CLI::Range(1, 1000));
  fed->add_option("--seed", fed_seed);
  fed->add_option("--threshold,-E", fed_threshold, "NEG events that trigger a rekey (default 3)");
  fed->add_option("--users", fed_users, "Users registered on every system");
  fed->add_option("--epochs", fed_epochs, "Successive rekey epochs");
  fed->add_option("--schedule", fed_schedule, "fifo | reorder | duplicate");
  fed->add_option("--out", fed_out, "Directory for the persisted files of every node");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run an attack simulation");
  std::string sim_attack, sim_password = "road851", sim_wordlist, sim_rs = "fox";
  std::uint64_t sim_trials = 100000;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> sim_size, sim_rs_length;
  std::size_t sim_k = 6;
  unsigned sim_workers = 0;
  sim->add_option("attack", sim_attack,
                  "inversion | inversion-oracle | dos | typo-substitution | typo-uniform | "
                  "flatness | ctd | msv")
      ->required()
      ->check(CLI::IsMember({"inversion", "inversion-oracle", "dos", "typo-substitution",
                             "typo-uniform", "flatness", "ctd", "msv"}));
  sim->add_option("--trials,-n", sim_trials)->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--hcl-size", sim_size)->check(CLI::Range(2, 36));
  sim->add_option("--rs-length", sim_rs_length);
  sim->add_option("--workers", sim_workers, "Worker threads (0 = all cores)");
  sim->add_option("-k", sim_k, "Sweetwords per user for the CTD baseline");
  sim->add_option("--password", sim_password, "Password for the CTD baseline");
  sim->add_option("--rs", sim_rs, "Random string for the flatness check");
  sim->add_option("--wordlist", sim_wordlist, "Dictionary for the flatness filter");

  // storage-report
  auto* storage = app.add_subcommand("storage-report", "Compare storage with a k-sweetword system");
  std::uint64_t st_n = 1000, st_k = 20, st_theta = 1;
  storage->add_option("-n", st_n, "Users");
  storage->add_option("-k", st_k, "Sweetwords per user in the baseline")->check(CLI::Range(2, 1 << 20));
  storage->add_option("--theta-bytes", st_theta, "Bytes per stored password-equivalent")
      ->check(CLI::PositiveNumber);

  // meter
  auto* meter = app.add_subcommand("meter", "Judge a random string");
  std::string m_rs, m_password, m_wordlist;
  meter->add_option("--rs", m_rs)->required();
  meter->add_option("--password,-p", m_password);
  meter->add_option("--wordlist", m_wordlist);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const pdp::Config config =
        config_path.empty() ? pdp::Config::from_environment() : pdp::Config::load(config_path);
    auto wordlist_for = [&](const std::string& flag) -> std::optional<pdp::meter::Wordlist> {
      if (!flag.empty()) return pdp::meter::Wordlist::load(flag);
      if (config.wordlist_path) return pdp::meter::Wordlist::load(*config.wordlist_path);
      return std::nullopt;
    };
    auto vault_options = [&] {
      pdp::vault::Vault::Options o;
      o.rs_length = config.rs_length;
      return o;
    };

    if (*gen) {
      auto rng = pdp::stream_rng(seed_or_random(gen_seed), 0);
      const auto ring = pdp::generate_hcl(rng, gen_size.value_or(config.hcl_size));
      if (!gen_init.empty()) {
        if (std::filesystem::exists(gen_init)) {
          throw pdp::Error("refusing to overwrite existing file " + gen_init);
        }
        pdp::vault::PasswordFile{ring, {}}.save(gen_init);
      }
      std::cout << ring.str() << "\n";
      return kExitOk;
    }

    if (*reg) {
      auto file = pdp::vault::PasswordFile::load(reg_files.file);
      auto checker_handle = open_checker(reg_files.checker, reg_files.file);
      const auto wordlist = wordlist_for(reg_wordlist);
      std::unique_ptr<pdp::ByteSource> salts;
      auto options = vault_options();
      if (reg_seed) {
        salts = std::make_unique<pdp::SeededByteSource>(*reg_seed);
        options.salts = salts.get();
      }
      if (wordlist) options.wordlist = &*wordlist;
      pdp::vault::Vault vault(std::move(file), *checker_handle.client, options);
      const auto result = vault.register_user(reg_user, reg_password, reg_rs);
      if (result.meter && result.meter->weak()) {
        std::cerr << "warning: weak random string:";
        for (auto r : result.meter->reasons) std::cerr << " " << pdp::meter::to_string(r);
        std::cerr << " (consider choosing another)\n";
      }
      vault.snapshot().save(reg_files.file);
      checker_handle.flush();
      std::cout << "registered " << reg_user << " chain " << result.record.chain.to_string() << "\n";
      return kExitOk;
    }

    if (*login) {
      auto file = pdp::vault::PasswordFile::load(login_files.file);
      auto checker_handle = open_checker(login_files.checker, login_files.file);
      pdp::vault::Vault vault(std::move(file), *checker_handle.client, vault_options());
      const auto outcome = vault.login(login_user, login_password, login_rs);
      switch (outcome.verdict) {
        case pdp::vault::Verdict::Granted:
          std::cout << "GRANTED\n";
          return kExitOk;
        case pdp::vault::Verdict::AlarmHoneyRS:
          append_audit(login_files.file, "ALARM honeyword random string for " + login_user);
          std::cout << "ALARM honeyword random string submitted for " << login_user << "\n";
          return kExitAlarm;
        case pdp::vault::Verdict::DeniedChainMismatch:
          append_audit(login_files.file, "CHAIN-MISMATCH " + login_user);
          std::cout << "DENIED\n";
          return kExitDenied;
        case pdp::vault::Verdict::DeniedWrongPassword:
          std::cout << "DENIED\n";
          return kExitDenied;
      }
    }

    if (*serve) {
      // Block termination signals before any thread starts so sigwait sees them.
      const auto signals = termination_signals();
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      pdp::checker::CheckerStore store;
      if (!serve_snapshot.empty() && std::filesystem::exists(serve_snapshot)) {
        store.load(serve_snapshot);
      }
      std::mutex save_mu;
      pdp::checker::CheckerService service(store, [&] {
        if (serve_snapshot.empty()) return;
        std::lock_guard lock(save_mu);
        store.save(serve_snapshot);
      });
      pdp::checker::CheckerServer server(service, serve_bind, serve_port);
      server.start();
      std::cout << "listening on " << serve_bind << ":" << server.port() << std::endl;
      int sig = 0;
      sigwait(&signals, &sig);
      server.stop();
      return kExitOk;
    }

    if (*fed) {
      const auto seed = seed_or_random(fed_seed);
      pdp::federation::FederationConfig fc;
      fc.nodes = fed_nodes;
      fc.seed = seed;
      fc.rekey_threshold = fed_threshold.value_or(config.rekey_threshold);
      fc.rs_length = config.rs_length;
      fc.faults = pdp::federation::faults_for(pdp::federation::parse_schedule(fed_schedule));
      auto rng = pdp::stream_rng(seed, 0xfed);
      pdp::federation::Federation federation(fc, pdp::generate_hcl(rng, config.hcl_size));

      struct Credential {
        std::string user, password, rs;
      };
      std::vector<Credential> users;
      for (std::size_t i = 0; i < fed_users; ++i) {
        Credential c{"user" + std::to_string(i), "pw" + std::to_string(rng() % 1000000),
                     std::string(pdp::random_rs(federation.node(0).hcl(), fc.rs_length, rng).str())};
        federation.register_everywhere(c.user, c.password, c.rs);
        users.push_back(std::move(c));
      }

      std::cout << "federation: " << fed_nodes << " systems, " << fed_users << " users, threshold "
                << fc.rekey_threshold << ", schedule " << fed_schedule << "\n";
      std::uint64_t alarms = 0;
      for (std::size_t epoch = 0; epoch < fed_epochs; ++epoch) {
        const auto target = static_cast<pdp::federation::SystemId>(epoch % fed_nodes);
        auto& node = federation.node(target);
        const auto before = node.epochs_completed();
        auto sensed = [&] {
          return node.state() == pdp::federation::NodeState::AwaitingAcks ||
                 node.epochs_completed() > before;
        };
        // An adversary holding F and the inverted passwords submits honeyword
        // random strings at one system until it senses the breach.
        for (std::size_t i = 0; !sensed() && i < users.size(); ++i) {
          const auto& u = users[i];
          const auto* record = node.vault().find(u.user);
          for (const auto& cand : pdp::enumerate_candidates(node.hcl(), record->chain)) {
            if (cand.front() == u.rs.front()) continue;
            const auto out = federation.login(target, u.user, u.password, cand.str());
            if (out.verdict == pdp::vault::Verdict::AlarmHoneyRS) ++alarms;
            break;
          }
        }
        const auto report = federation.run_until_quiescent();
        std::cout << "epoch " << epoch + 1 << ": initiator " << target << ", "
                  << report.messages_delivered << " messages, " << report.timeouts
                  << " timeouts, converged " << (federation.converged() ? "yes" : "no") << "\n";
      }
      std::uint64_t completed = 0;
      for (std::size_t n = 0; n < federation.size(); ++n) {
        completed += federation.node(static_cast<pdp::federation::SystemId>(n)).epochs_completed();
      }

      std::uint64_t granted = 0, attempts = 0;
      for (std::size_t n = 0; n < federation.size(); ++n) {
        for (const auto& u : users) {
          ++attempts;
          const auto out = federation.node(static_cast<pdp::federation::SystemId>(n))
                               .login(u.user, u.password, u.rs);
          if (out.verdict == pdp::vault::Verdict::Granted) ++granted;
        }
      }
      if (!fed_out.empty()) federation.persist(fed_out);
      std::cout << "hcl " << federation.node(0).hcl().str() << "\n";
      print_metric(std::cout, "alarms", static_cast<double>(alarms), 0);
      print_metric(std::cout, "epochs_completed", static_cast<double>(completed), 0);
      print_metric(std::cout, "converged", federation.converged() ? 1 : 0, 0);
      print_metric(std::cout, "post_rekey_logins_granted",
                   static_cast<double>(granted) / static_cast<double>(std::max<std::uint64_t>(attempts, 1)), 0);
      return federation.converged() && granted == attempts ? kExitOk : kExitDenied;
    }

    if (*sim) {
      const auto seed = seed_or_random(sim_seed);
      const std::size_t ring_size = sim_size.value_or(config.hcl_size);
      const std::size_t rs_length = sim_rs_length.value_or(config.rs_length);
      auto ring_rng = pdp::stream_rng(seed, 0x41c);
      const auto hcl = pdp::generate_hcl(ring_rng, ring_size);
      pdp::adversary::SimulationOptions so{rs_length, sim_workers};

      auto print_report = [&](const pdp::adversary::AttackReport& r, double expected,
                              std::string_view expected_label) {
        std::cout << std::left << std::setw(14) << "attack" << r.name << "\n"
                  << std::setw(14) << "trials" << r.trials << "\n"
                  << std::setw(14) << "alarms" << r.detections << "\n"
                  << std::setw(14) << "granted" << r.successes << "\n"
                  << std::setw(14) << "alarm rate" << std::setprecision(6)
                  << r.estimated_probability() << " +/- " << r.half_width() << " (99%)\n"
                  << std::setw(14) << expected_label << expected << "\n";
        print_metric(std::cout, r.name + "_alarm_rate", r.estimated_probability(), r.half_width());
        print_metric(std::cout, r.name + "_granted_rate", r.success_rate(), 0);
      };

      const double big_l = static_cast<double>(ring_size);
      if (sim_attack == "inversion" || sim_attack == "inversion-oracle") {
        const auto attacker = sim_attack == "inversion" ? pdp::adversary::Attacker::UniformCandidate
                                                        : pdp::adversary::Attacker::FirstCharOracle;
        const auto r = pdp::adversary::simulate_inversion_attack(sim_trials, hcl, seed, attacker, so);
        print_report(r, attacker == pdp::adversary::Attacker::UniformCandidate ? (big_l - 1) / big_l : 0.0,
                     "expected");
      } else if (sim_attack == "dos" || sim_attack == "typo-uniform") {
        pdp::adversary::AttackReport r =
            sim_attack == "dos"
                ? pdp::adversary::simulate_dos(sim_trials, hcl, seed, so)
                : pdp::adversary::simulate_typo(sim_trials,
                                                pdp::adversary::TypoModel::AllCharsWrongUniform,
                                                hcl, seed, so);
        std::vector<int> chain(rs_length - 1, 1);
        const auto exact = pdp::adversary::dos_probability_exact(ring_size, rs_length,
                                                                 pdp::DistanceChain(chain));
        print_report(r, exact.value(), "exact");
        std::cout << std::setw(14) << "exact ratio" << exact.to_string() << "\n"
                  << std::setw(14) << "formula" << pdp::adversary::dos_formula_literal(ring_size, rs_length)
                  << "  (closed form as typeset; not a probability)\n";
        print_metric(std::cout, "exact_probability", exact.value(), 0);
        print_metric(std::cout, "formula_literal",
                     pdp::adversary::dos_formula_literal(ring_size, rs_length), 0);
      } else if (sim_attack == "typo-substitution") {
        const auto r = pdp::adversary::simulate_typo(
            sim_trials, pdp::adversary::TypoModel::SingleCharSubstitution, hcl, seed, so);
        print_report(r, 0.0, "expected");
      } else if (sim_attack == "flatness") {
        const auto wordlist = wordlist_for(sim_wordlist);
        const auto rs = pdp::RandomString::parse(hcl, sim_rs);
        const auto report = pdp::adversary::flatness_check(hcl, pdp::distance_chain(hcl, rs),
                                                           wordlist ? &*wordlist : nullptr);
        std::cout << "candidates    " << report.candidates << " of " << report.ring_size << "\n"
                  << "uniform       " << (report.uniform ? "yes" : "no") << "\n";
        if (report.dictionary_survivors) {
          std::cout << "dictionary    " << *report.dictionary_survivors << " candidates survive\n";
        }
        std::cout << "flatness      " << (report.degraded() ? "degraded" : "perfect") << "\n";
        print_metric(std::cout, "candidates", static_cast<double>(report.candidates), 0);
        if (report.dictionary_survivors) {
          print_metric(std::cout, "dictionary_survivors",
                       static_cast<double>(*report.dictionary_survivors), 0);
        }
      } else if (sim_attack == "ctd") {
        const auto list = pdp::adversary::ctd_generate(sim_password, sim_k, seed, 1);
        std::cout << "sweetwords   ";
        for (const auto& w : list.sweetwords) std::cout << " " << w;
        std::cout << "\n";
        const auto p = pdp::adversary::ctd_typo_probability(sim_k);
        std::cout << "typo->honeyword probability " << p.to_string() << "\n";
        print_metric(std::cout, "ctd_typo_probability", p.value(), 0);
      } else if (sim_attack == "msv") {
        pdp::checker::CheckerStore sa, sb;
        pdp::checker::LocalChecker ca(sa), cb(sb);
        auto o = vault_options();
        o.rs_length = rs_length;
        pdp::vault::Vault a(hcl, ca, o), b(hcl, cb, o);
        auto rng = pdp::stream_rng(seed, 0x757);
        const auto rs = pdp::random_rs(hcl, rs_length, rng);
        a.register_user("user", "password", rs.str());
        b.register_user("user", "password", rs.str());
        const auto pdp_report = pdp::adversary::simulate_msv(a, b, "user");
        const auto ctd = pdp::adversary::simulate_ctd_msv(sim_password, sim_k, sim_trials, seed);
        std::cout << "pdp chains identical  " << (pdp_report.chains_identical ? "yes" : "no") << "\n"
                  << "pdp intersection      " << pdp_report.intersection << " candidates\n"
                  << "ctd isolation rate    " << ctd.isolation_rate() << " over " << ctd.seeds
                  << " seeds (mean intersection " << ctd.mean_intersection << ")\n";
        print_metric(std::cout, "pdp_intersection", static_cast<double>(pdp_report.intersection), 0);
        print_metric(std::cout, "ctd_isolation_rate", ctd.isolation_rate(), 0);
      }
      return kExitOk;
    }

    if (*storage) {
      std::cout << pdp::format_storage_report(
          pdp::storage_report(st_n, st_k, st_theta, config.hcl_size));
      return kExitOk;
    }

    if (*meter) {
      const auto wordlist = wordlist_for(m_wordlist).value_or(pdp::meter::Wordlist{});
      const auto verdict = pdp::meter::evaluate_rs(m_rs, m_password, wordlist);
      std::cout << pdp::meter::to_string(verdict.strength);
      for (auto r : verdict.reasons) std::cout << " " << pdp::meter::to_string(r);
      std::cout << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "pdp: error: " << e.what() << "\n";
    return kExitDenied;
  }
  return kExitUsage;
}
