#include "jisa/live_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <future>
#include <thread>

#include "jisa/errors.hpp"
#include "jisa/wire.hpp"

namespace jisa {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

ListenAddress parse_listen(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw InputError("listen address must be host:port, got '" + text + "'");
  }
  ListenAddress out{text.substr(0, colon), 0};
  try {
    std::size_t used = 0;
    const int port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("port");
    out.port = static_cast<unsigned short>(port);
  } catch (const std::exception&) {
    throw InputError("bad port in listen address '" + text + "'");
  }
  return out;
}

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, ChannelSupervisor& supervisor)
      : ws_(std::move(socket)), supervisor_(supervisor) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->open_ = true;
      std::weak_ptr<Connection> weak = self;
      auto ex = self->ws_.get_executor();
      self->supervisor_.set_sender([weak, ex, sid = self->supervisor_.session_id()](const SupervisorEvent& e) {
        auto text = std::make_shared<std::string>(to_wire({sid, e}));
        asio::post(ex, [weak, text] {
          if (auto c = weak.lock()) c->send(std::move(*text));
        });
      });
      self->read();
    });
  }

  void send(std::string text) {
    if (!open_) return;
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write_next();
  }

  void close() {
    if (!open_) return;
    open_ = false;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->disconnected();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->supervisor_.deliver(from_wire(text).event);
      } catch (const InputError& e) {
        self->supervisor_.on_rejected(e.what());
      }
      self->read();
    });
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->disconnected();
        return;
      }
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write_next();
    });
  }

  void disconnected() {
    if (!open_) return;
    open_ = false;
    outbox_.clear();
    // Only the current connection owns the sender; a replaced one may not clear it.
    if (!replaced_) supervisor_.set_sender(nullptr);
  }

 public:
  bool replaced_ = false;

 private:
  websocket::stream<beast::tcp_stream> ws_;
  ChannelSupervisor& supervisor_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  bool open_ = false;
};

}  // namespace

struct LiveServer::Impl {
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  ChannelSupervisor& supervisor;
  std::shared_ptr<Connection> current;
  std::thread thread;
  bool stopped = false;

  explicit Impl(ChannelSupervisor& s) : supervisor(s) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      if (current) {
        current->replaced_ = true;
        current->close();
      }
      current = std::make_shared<Connection>(std::move(socket), supervisor);
      current->start();
      accept();
    });
  }
};

LiveServer::LiveServer(ChannelSupervisor& supervisor, const ListenAddress& address)
    : impl_(std::make_unique<Impl>(supervisor)) {
  beast::error_code ec;
  const auto ip = asio::ip::make_address(address.host == "localhost" ? "127.0.0.1" : address.host, ec);
  if (ec) throw InputError("bad listen host '" + address.host + "'");
  const tcp::endpoint endpoint(ip, address.port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) throw InputError("cannot listen on " + address.host + ":" + std::to_string(address.port) + ": " + ec.message());
  impl_->accept();
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

LiveServer::~LiveServer() { stop(); }

unsigned short LiveServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void LiveServer::stop() {
  if (impl_->stopped) return;
  impl_->stopped = true;
  std::promise<void> closed;
  asio::post(impl_->ioc, [this, &closed] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    if (impl_->current) {
      impl_->current->replaced_ = true;
      impl_->current->close();
    }
    closed.set_value();
  });
  closed.get_future().wait();
  impl_->supervisor.set_sender(nullptr);
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->current.reset();
}

}  // namespace jisa
