#include <boost/asio.hpp>
#include <istream>
#include <thread>

#include "pdp/error.hpp"
#include "pdp/honeychecker.hpp"

namespace pdp::checker {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

constexpr std::size_t kMaxLine = 4096;

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, CheckerService& service)
      : socket_(std::move(socket)), service_(service), buffer_(kMaxLine) {}

  void start() { read(); }

 private:
  void read() {
    asio::async_read_until(socket_, buffer_, '\n',
                           [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
                             self->on_line(ec);
                           });
  }

  void on_line(boost::system::error_code ec) {
    if (ec == asio::error::not_found) {
      write("ERR line too long", /*close_after=*/true);
      return;
    }
    if (ec) return;
    std::istream in(&buffer_);
    std::string line;
    std::getline(in, line);
    write(service_.handle(line), false);
  }

  void write(std::string response, bool close_after) {
    out_ = std::move(response);
    out_ += '\n';
    asio::async_write(socket_, asio::buffer(out_),
                      [self = shared_from_this(), close_after](boost::system::error_code ec,
                                                              std::size_t) {
                        if (ec || close_after) {
                          boost::system::error_code ignored;
                          self->socket_.shutdown(tcp::socket::shutdown_both, ignored);
                          return;
                        }
                        self->read();
                      });
  }

  tcp::socket socket_;
  CheckerService& service_;
  asio::streambuf buffer_;
  std::string out_;
};

}  // namespace

struct CheckerServer::Impl {
  Impl(CheckerService& s, const std::string& address, std::uint16_t port)
      : service(s), acceptor(io, tcp::endpoint(asio::ip::make_address(address), port)) {}

  void accept() {
    acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Session>(std::move(socket), service)->start();
      accept();
    });
  }

  CheckerService& service;
  asio::io_context io;
  tcp::acceptor acceptor;
  std::thread worker;
};

CheckerServer::CheckerServer(CheckerService& service, std::string address, std::uint16_t port)
    : impl_(std::make_unique<Impl>(service, address, port)) {
  impl_->accept();
}

CheckerServer::~CheckerServer() { stop(); }

std::uint16_t CheckerServer::port() const noexcept { return impl_->acceptor.local_endpoint().port(); }

void CheckerServer::start() {
  impl_->worker = std::thread([this] { impl_->io.run(); });
}

void CheckerServer::run() { impl_->io.run(); }

void CheckerServer::stop() {
  impl_->io.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

struct RemoteChecker::Impl {
  asio::io_context io;
  tcp::socket socket{io};
  asio::streambuf buffer;
};

RemoteChecker::RemoteChecker(const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>()) {
  try {
    tcp::resolver resolver(impl_->io);
    asio::connect(impl_->socket, resolver.resolve(host, std::to_string(port)));
  } catch (const boost::system::system_error& e) {
    throw Error("cannot reach honeychecker at " + host + ":" + std::to_string(port) + ": " +
                e.what());
  }
}

RemoteChecker::~RemoteChecker() = default;

std::string RemoteChecker::request(std::string_view line) {
  try {
    std::string out(line);
    out += '\n';
    asio::write(impl_->socket, asio::buffer(out));
    asio::read_until(impl_->socket, impl_->buffer, '\n');
  } catch (const boost::system::system_error& e) {
    throw Error(std::string("honeychecker connection failed: ") + e.what());
  }
  std::istream in(&impl_->buffer);
  std::string response;
  std::getline(in, response);
  return response;
}

namespace {

void expect_ok(const std::string& response) {
  if (response != "OK") throw Error("honeychecker refused request: " + response);
}

}  // namespace

void RemoteChecker::set(std::string_view username, char first_char) {
  expect_ok(request("SET " + std::string(username) + ' ' + first_char));
}

Feedback RemoteChecker::check(std::string_view username, char first_char) {
  const auto r = request("CHECK " + std::string(username) + ' ' + first_char);
  if (r == "POS") return Feedback::Pos;
  if (r == "NEG") return Feedback::Neg;
  if (r == "UNKNOWN") return Feedback::Unknown;
  throw Error("honeychecker refused request: " + r);
}

void RemoteChecker::erase(std::string_view username) {
  expect_ok(request("DEL " + std::string(username)));
}

}  // namespace pdp::checker
