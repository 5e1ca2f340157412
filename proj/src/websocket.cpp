#include "teleassist/websocket.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

namespace teleassist::ws {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

websocket::close_reason to_reason(const CloseRequest& c) {
  websocket::close_reason r(static_cast<websocket::close_code>(c.code));
  r.reason = c.reason;
  return r;
}

CloseRequest from_reason(const websocket::close_reason& r) {
  return CloseRequest{static_cast<CloseCode>(r.code), std::string(r.reason.data(), r.reason.size())};
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

// ---------------------------------------------------------------------------
// Client

struct Client::Impl {
  net::io_context ioc;
  std::optional<websocket::stream<tcp::socket>> ws;
  beast::flat_buffer buffer;
  bool reading = false;
  std::optional<beast::error_code> read_result;

  void start_read() {
    reading = true;
    read_result.reset();
    ws->async_read(buffer, [this](beast::error_code ec, std::size_t) {
      reading = false;
      read_result = ec;
    });
  }
};

Client::Client() : impl_(std::make_unique<Impl>()) {}
Client::~Client() { close(); }

void Client::connect(const std::string& host, std::uint16_t port, const std::string& path) {
  try {
    tcp::resolver resolver(impl_->ioc);
    impl_->ws.emplace(impl_->ioc);
    net::connect(impl_->ws->next_layer(), resolver.resolve(host, std::to_string(port)));
    impl_->ws->next_layer().set_option(tcp::no_delay(true));
    impl_->ws->handshake(host + ":" + std::to_string(port), path);
    impl_->ws->text(true);
  } catch (const beast::system_error& e) {
    impl_->ws.reset();
    throw std::runtime_error("websocket connect failed: " + std::string(e.what()));
  }
}

bool Client::is_open() const { return impl_->ws && impl_->ws->is_open(); }

void Client::send_text(std::string_view text) {
  if (!is_open()) throw std::runtime_error("send on a closed connection");
  impl_->ws->write(net::buffer(text.data(), text.size()));
}

std::optional<Message> Client::receive(std::chrono::milliseconds timeout) {
  if (!impl_->ws) return std::nullopt;
  if (!impl_->reading && !impl_->read_result) impl_->start_read();
  impl_->ioc.restart();
  impl_->ioc.run_for(timeout);
  if (!impl_->read_result) return std::nullopt;  // still in flight; resumes on the next call
  const beast::error_code ec = *impl_->read_result;
  impl_->read_result.reset();
  Message m;
  if (ec) {
    m.kind = Message::Kind::Close;
    m.close = ec == websocket::error::closed ? from_reason(impl_->ws->reason())
                                             : CloseRequest{CloseCode::Normal, ec.message()};
    impl_->ws.reset();
    return m;
  }
  m.text = beast::buffers_to_string(impl_->buffer.data());
  impl_->buffer.consume(impl_->buffer.size());
  return m;
}

void Client::close() {
  if (!impl_->ws) return;
  beast::error_code ec;
  if (impl_->ws->is_open() && !impl_->reading) impl_->ws->close(websocket::close_code::normal, ec);
  impl_->ws->next_layer().close(ec);
  impl_->ws.reset();
}

// ---------------------------------------------------------------------------
// Server

struct SessionServer::Impl {
  Impl(Session s, ServerOptions o) : session(std::move(s)), options(std::move(o)), acceptor(ioc) {}

  struct Connection;

  Session session;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::thread io_thread;
  std::thread sim_thread;
  std::atomic<bool> stopping{false};
  std::atomic<bool> started{false};
  std::atomic<std::uint64_t> steps{0};

  // Shared between the sim thread and the I/O thread.
  std::mutex mu;
  std::condition_variable cv;
  bool connected = false;
  std::deque<std::string> inbox;
  std::optional<json> latest_state;
  std::vector<json> pending_events;
  std::optional<CloseRequest> pending_close;

  // I/O thread only.
  std::shared_ptr<Connection> active;

  void do_accept();
  void serve_http(tcp::socket socket);
  void sim_loop();
  void notify_writer() {
    net::post(ioc, [this] { flush(); });
  }
  void flush();
};

struct SessionServer::Impl::Connection : std::enable_shared_from_this<Connection> {
  Connection(Impl& server, tcp::socket socket) : server(server), ws(std::move(socket)) {}

  Impl& server;
  websocket::stream<tcp::socket> ws;
  beast::flat_buffer buffer;
  bool writing = false;
  bool closing = false;
  std::string outgoing;

  void read() {
    ws.async_read(buffer, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      // Peer close, transport error, or a violation the stream already
      // answered with a close frame (oversized message, bad framing).
      detach();
      return;
    }
    if (!ws.got_text()) {
      close(CloseRequest{CloseCode::InvalidPayload, "only text messages are accepted"});
      return;
    }
    {
      std::lock_guard lock(server.mu);
      std::istringstream lines(beast::buffers_to_string(buffer.data()));
      std::string line;
      while (std::getline(lines, line)) {
        if (!blank(line)) server.inbox.push_back(line);
      }
    }
    buffer.consume(buffer.size());
    read();
  }

  void send(std::string text) {
    writing = true;
    outgoing = std::move(text);
    ws.async_write(net::buffer(outgoing), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing = false;
      if (ec) {
        self->detach();
        return;
      }
      self->server.flush();
    });
  }

  void close(const CloseRequest& c) {
    if (closing) return;
    closing = true;
    ws.async_close(to_reason(c), [self = shared_from_this()](beast::error_code) { self->detach(); });
  }

  void detach() {
    if (server.active.get() != this) return;
    server.active.reset();
    std::lock_guard lock(server.mu);
    server.connected = false;
    server.inbox.clear();
  }
};

void SessionServer::Impl::do_accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    socket.set_option(tcp::no_delay(true));
    serve_http(std::move(socket));
    do_accept();
  });
}

void SessionServer::Impl::serve_http(tcp::socket socket) {
  struct Pending {
    tcp::socket socket;
    beast::flat_buffer buffer;
    http::request<http::string_body> req;
    http::response<http::string_body> res;
  };
  auto p = std::make_shared<Pending>(Pending{std::move(socket), {}, {}, {}});
  http::async_read(p->socket, p->buffer, p->req, [this, p](beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(p->req)) {
      auto conn = std::make_shared<Connection>(*this, std::move(p->socket));
      conn->ws.read_message_max(kMaxMessageBytes);
      conn->ws.text(true);
      conn->ws.async_accept(p->req, [this, conn](beast::error_code ec) {
        if (ec) return;
        if (active) {
          conn->close(CloseRequest{CloseCode::TryAgainLater, "session already has a client"});
          return;
        }
        active = conn;
        {
          std::lock_guard lock(mu);
          connected = true;
          pending_close.reset();
          latest_state.reset();
          pending_events.clear();
          inbox.clear();
        }
        cv.notify_all();
        conn->read();
      });
      return;
    }
    const bool health = p->req.method() == http::verb::get && p->req.target() == "/health";
    p->res = http::response<http::string_body>(health ? http::status::ok : http::status::upgrade_required,
                                               p->req.version());
    p->res.set(http::field::content_type, "text/plain");
    p->res.body() = health ? "ok\n" : "this endpoint speaks WebSocket\n";
    p->res.keep_alive(false);
    p->res.prepare_payload();
    http::async_write(p->socket, p->res, [p](beast::error_code, std::size_t) {
      beast::error_code ignored;
      p->socket.shutdown(tcp::socket::shutdown_both, ignored);
    });
  });
}

void SessionServer::Impl::flush() {
  if (!active || active->writing || active->closing) return;
  std::optional<json> state;
  std::optional<CloseRequest> close;
  {
    std::lock_guard lock(mu);
    close = pending_close;
    if (!close && latest_state) {
      state = std::move(latest_state);
      latest_state.reset();
      (*state)["events"] = std::move(pending_events);
      pending_events.clear();
    }
  }
  if (close) {
    active->close(*close);
  } else if (state) {
    active->send(state->dump() + "\n");
  }
}

void SessionServer::Impl::sim_loop() {
  const auto dt = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(session.engine().config().sim.dt));
  auto next = std::chrono::steady_clock::now();
  while (!stopping) {
    bool produced = false;
    {
      std::unique_lock lock(mu);
      // Paused while nobody is connected; resume without a backlog.
      cv.wait(lock, [this] { return stopping || (connected && !pending_close); });
      if (stopping) break;
      if (next < std::chrono::steady_clock::now() - dt) next = std::chrono::steady_clock::now();
      while (!inbox.empty() && !pending_close) {
        pending_close = session.handle(inbox.front());
        inbox.pop_front();
      }
      if (pending_close) {
        produced = true;
      } else {
        Session::StepOutput out = session.step();
        ++steps;
        if (out.state) {
          // A newer state supersedes an unsent one; its events carry over.
          for (json& e : (*out.state)["events"]) pending_events.push_back(std::move(e));
          (*out.state)["events"] = json::array();
          latest_state = std::move(*out.state);
          produced = true;
        }
      }
    }
    if (produced) notify_writer();
    next += dt;
    std::this_thread::sleep_until(next);
  }
}

SessionServer::SessionServer(Session session, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(session), std::move(options))) {}

SessionServer::~SessionServer() { stop(); }

std::uint64_t SessionServer::steps() const { return impl_->steps.load(); }

std::uint16_t SessionServer::start() {
  Impl& s = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(s.options.bind_address, ec);
  if (ec) throw std::runtime_error("invalid bind address " + s.options.bind_address);
  const tcp::endpoint endpoint(address, s.options.port);
  s.acceptor.open(endpoint.protocol());
  s.acceptor.set_option(net::socket_base::reuse_address(true));
  s.acceptor.bind(endpoint, ec);
  if (ec) throw std::runtime_error("port " + std::to_string(s.options.port) + " is not available");
  s.acceptor.listen();
  const std::uint16_t port = s.acceptor.local_endpoint().port();
  s.started = true;
  s.do_accept();
  s.io_thread = std::thread([&s] { s.ioc.run(); });
  s.sim_thread = std::thread([&s] { s.sim_loop(); });
  return port;
}

void SessionServer::stop() {
  Impl& s = *impl_;
  if (!s.started.exchange(false)) return;
  {
    std::lock_guard lock(s.mu);
    s.stopping = true;
  }
  s.cv.notify_all();
  if (s.sim_thread.joinable()) s.sim_thread.join();
  net::post(s.ioc, [&s] {
    beast::error_code ignored;
    s.acceptor.close(ignored);
    if (s.active) {
      beast::get_lowest_layer(s.active->ws).close(ignored);
      s.active.reset();
    }
    s.ioc.stop();
  });
  if (s.io_thread.joinable()) s.io_thread.join();
}

void SessionServer::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [this] { return impl_->stopping.load(); });
}

}  // namespace teleassist::ws
