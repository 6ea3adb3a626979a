#include "mrdial/net/ws_server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <csignal>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/session.hpp"

namespace mrdial::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

std::pair<std::string, std::uint16_t> parse_addr(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == addr.size()) {
    throw ConfigError("addr is HOST:PORT", "got '" + std::string(addr) + "'", "/service/addr");
  }
  const std::string host(addr.substr(0, colon));
  const std::string port_text(addr.substr(colon + 1));
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigError("addr port is a number", "got '" + port_text + "'", "/service/addr");
  }
  if (port > 65535) {
    throw ConfigError("addr port in [0, 65535]", "got " + port_text, "/service/addr");
  }
  return {host, static_cast<std::uint16_t>(port)};
}

namespace {

constexpr auto kPacePeriod = std::chrono::milliseconds(4);
constexpr std::int64_t kMaxCatchUpTicks = 250;

struct Registry {
  std::atomic<std::size_t> active{0};
  std::atomic<std::size_t> total{0};
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
  Connection(tcp::socket socket, const Config& config, Registry& registry)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        config_(config),
        registry_(registry) {}

  ~Connection() { registry_.active--; }

  void start(http::request<http::string_body> request) {
    registry_.active++;
    registry_.total++;
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

  void shutdown() {
    asio::post(ws_.get_executor(), [self = shared_from_this()] {
      if (self->session_ && !self->session_->closed()) self->session_->close("server_shutdown");
      self->pump();
    });
  }

private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    session_ = std::make_unique<service::Session>(config_, "ws-" + std::to_string(registry_.total));
    start_ = std::chrono::steady_clock::now();
    do_read();
    schedule();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      gone_ = true;
      timer_.cancel();
      return;
    }
    session_->receive(beast::buffers_to_string(buffer_.data()));
    buffer_.consume(buffer_.size());
    pump();
    if (!session_->closed()) do_read();
  }

  void schedule() {
    timer_.expires_after(kPacePeriod);
    timer_.async_wait(beast::bind_front_handler(&Connection::on_timer, shared_from_this()));
  }

  void on_timer(beast::error_code ec) {
    if (ec || gone_ || session_->closed()) return;
    using namespace std::chrono;
    const auto elapsed = duration_cast<milliseconds>(steady_clock::now() - start_).count();
    std::int64_t due = elapsed * service::kHapticRateHz / 1000;
    const std::int64_t ticks = session_->simulation().haptic_tick();
    // A stalled host drops time instead of fast-forwarding the simulation.
    if (due - ticks > kMaxCatchUpTicks) {
      start_ += milliseconds(due - ticks - kMaxCatchUpTicks);
      due = ticks + kMaxCatchUpTicks;
    }
    for (std::int64_t t = ticks; t < due; ++t) session_->tick();

    if (writing_ &&
        steady_clock::now() - write_started_ > duration<double>(config_.service.idle_timeout_s)) {
      session_->close("timeout");
      beast::get_lowest_layer(ws_).close();
      return;
    }
    pump();
    schedule();
  }

  void pump() {
    if (writing_ || closing_ || gone_) return;
    if (auto message = session_->outbox().pop()) {
      writing_ = true;
      write_started_ = std::chrono::steady_clock::now();
      out_ = protocol::encode(*message);
      ws_.text(true);
      ws_.async_write(asio::buffer(out_),
                      beast::bind_front_handler(&Connection::on_write, shared_from_this()));
      return;
    }
    if (session_->closed()) {
      closing_ = true;
      timer_.cancel();
      ws_.async_close(websocket::close_code::normal,
                      [self = shared_from_this()](beast::error_code) {});
    }
  }

  void on_write(beast::error_code ec, std::size_t) {
    writing_ = false;
    if (ec) {
      gone_ = true;
      timer_.cancel();
      return;
    }
    pump();
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  const Config& config_;
  Registry& registry_;
  std::unique_ptr<service::Session> session_;
  beast::flat_buffer buffer_;
  std::string out_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point write_started_;
  bool writing_ = false;
  bool closing_ = false;
  bool gone_ = false;
};

// Reads the HTTP upgrade request and routes it.
class Handshake : public std::enable_shared_from_this<Handshake> {
public:
  Handshake(tcp::socket socket, const Config& config, const std::string& path, Registry& registry,
            std::function<void(std::weak_ptr<Connection>)> track)
      : stream_(std::move(socket)),
        config_(config),
        path_(path),
        registry_(registry),
        track_(std::move(track)) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(10));
    http::async_read(stream_, buffer_, request_,
                     beast::bind_front_handler(&Handshake::on_request, shared_from_this()));
  }

private:
  void on_request(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(request_) && request_.target() == path_) {
      stream_.expires_never();
      auto conn = std::make_shared<Connection>(stream_.release_socket(), config_, registry_);
      track_(conn);
      conn->start(std::move(request_));
      return;
    }
    auto response = std::make_shared<http::response<http::string_body>>(http::status::not_found,
                                                                        request_.version());
    response->set(http::field::content_type, "text/plain");
    response->body() = "mrdial: connect a WebSocket to " + path_ + "\n";
    response->prepare_payload();
    http::async_write(stream_, *response,
                      [self = shared_from_this(), response](beast::error_code, std::size_t) {
                        self->stream_.socket().shutdown(tcp::socket::shutdown_send);
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  const Config& config_;
  const std::string& path_;
  Registry& registry_;
  std::function<void(std::weak_ptr<Connection>)> track_;
};

} // namespace

struct WsServer::Impl {
  Impl(Config c, ServerOptions o)
      : config(std::move(c)), options(std::move(o)), acceptor(ioc), signals(ioc) {}


  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // listener closed
      std::make_shared<Handshake>(std::move(socket), config, options.path, registry,
                                  [this](std::weak_ptr<Connection> c) {
                                    std::lock_guard lock(conn_mu);
                                    connections.push_back(std::move(c));
                                  })
          ->run();
      accept();
    });
  }

  void request_stop() {
    {
      std::lock_guard lock(state_mu);
      if (stopping) return;
      stopping = true;
    }
    asio::post(ioc, [this] {
      beast::error_code ignored;
      acceptor.close(ignored);
      signals.cancel(ignored);
      std::lock_guard lock(conn_mu);
      for (auto& weak : connections) {
        if (auto c = weak.lock()) c->shutdown();
      }
    });
    // Give sessions a moment to send their bye frames.
    std::thread([this] {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      work.reset();
      ioc.stop();
      std::lock_guard lock(state_mu);
      stopped = true;
      state_cv.notify_all();
    }).detach();
  }

  // Declared before the io_context: pending handlers own connections that
  // reference these during io_context destruction.
  Config config;
  ServerOptions options;
  Registry registry;
  asio::io_context ioc;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  tcp::acceptor acceptor;
  asio::signal_set signals;
  std::vector<std::thread> threads;
  std::mutex conn_mu;
  std::vector<std::weak_ptr<Connection>> connections;
  std::mutex state_mu;
  std::condition_variable state_cv;
  bool stopping = false;
  bool stopped = false;
};

WsServer::WsServer(Config config, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(options))) {
  validate(impl_->config);
}

WsServer::~WsServer() {
  stop();
}

std::uint16_t WsServer::start() {
  auto& im = *impl_;
  const auto address = asio::ip::make_address(im.options.host);
  const tcp::endpoint endpoint(address, im.options.port);
  im.acceptor.open(endpoint.protocol());
  im.acceptor.set_option(asio::socket_base::reuse_address(true));
  im.acceptor.bind(endpoint);
  im.acceptor.listen(asio::socket_base::max_listen_connections);
  im.work.emplace(im.ioc.get_executor());
  im.accept();

  if (im.options.handle_signals) {
    im.signals.add(SIGINT);
    im.signals.add(SIGTERM);
    im.signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) impl_->request_stop();
    });
  }

  const int n = std::max(1, im.options.threads);
  for (int i = 0; i < n; ++i) im.threads.emplace_back([&im] { im.ioc.run(); });
  return im.acceptor.local_endpoint().port();
}

void WsServer::stop() {
  if (!impl_ || impl_->threads.empty()) return;
  impl_->request_stop();
  wait();
}

void WsServer::wait() {
  auto& im = *impl_;
  {
    std::unique_lock lock(im.state_mu);
    im.state_cv.wait(lock, [&] { return im.stopped; });
  }
  for (auto& t : im.threads) {
    if (t.joinable()) t.join();
  }
  im.threads.clear();
}

std::size_t WsServer::active_sessions() const { return impl_->registry.active; }
std::size_t WsServer::total_sessions() const { return impl_->registry.total; }

} // namespace mrdial::net
