"""Tiny in-process chat-completion endpoint for client tests.

Serves queued responses and records every request payload so tests can
inspect exactly what the client sent (statelessness, auth header, body).
"""

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, HTTPServer


def chat_body(content):
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


class MockEndpoint:
    def __init__(self, delay=0.0):
        self.requests = []
        self.responses = []  # queue of (status, body-dict-or-str)
        self.delay = delay  # seconds to stall before answering
        self._server = None
        self._thread = None

    def queue(self, status, body):
        self.responses.append((status, body))

    def queue_content(self, content):
        self.queue(200, chat_body(content))

    @property
    def url(self):
        host, port = self._server.server_address
        return f"http://{host}:{port}/v1/chat/completions"

    def __enter__(self):
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length))
                outer.requests.append({
                    "payload": payload,
                    "authorization": self.headers.get("Authorization"),
                })
                if outer.delay:
                    time.sleep(outer.delay)
                status, body = (
                    outer.responses.pop(0) if outer.responses
                    else (500, {"error": "no queued response"})
                )
                data = (body if isinstance(body, str)
                        else json.dumps(body)).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self._server = HTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()
        self._thread.join()
