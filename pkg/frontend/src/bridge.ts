/**
 * Thin gateway between browsers and the orchestrator: serves the static
 * UI and forwards envelopes one-to-one between a WebSocket at /ws and a
 * per-session TCP connection to the orchestrator's client port. One ws
 * text frame equals one newline-terminated TCP frame; no semantics are
 * added on either side.
 */

import * as fs from "node:fs";
import * as http from "node:http";
import * as net from "node:net";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { WebSocketServer, type WebSocket } from "ws";

const MAX_FRAME = 64 * 1024;

export interface BridgeOptions {
  port: number;
  orchestratorHost: string;
  orchestratorPort: number;
  staticDir?: string;
}

export interface Bridge {
  port: number;
  close(): Promise<void>;
}

const MIME: Record<string, string> = {
  ".html": "text/html; charset=utf-8",
  ".js": "text/javascript; charset=utf-8",
  ".css": "text/css; charset=utf-8",
  ".svg": "image/svg+xml",
};

function serveStatic(
  root: string,
  req: http.IncomingMessage,
  res: http.ServerResponse,
): void {
  const url = (req.url ?? "/").split("?")[0];
  const rel = url === "/" ? "index.html" : url.replace(/^\/+/, "");
  const file = path.normalize(path.join(root, rel));
  if (!file.startsWith(path.normalize(root))) {
    res.writeHead(403).end();
    return;
  }
  fs.readFile(file, (err, data) => {
    if (err) {
      res.writeHead(404).end("not found");
      return;
    }
    res.writeHead(200, {
      "content-type": MIME[path.extname(file)] ?? "application/octet-stream",
    });
    res.end(new Uint8Array(data));
  });
}

function pipeSession(
  ws: WebSocket,
  host: string,
  port: number,
): void {
  const tcp = net.connect(port, host);
  tcp.setNoDelay(true);
  let buffer = Buffer.alloc(0);

  ws.on("message", (data, isBinary) => {
    if (isBinary) return;
    const text = data.toString();
    if (Buffer.byteLength(text) > MAX_FRAME) return;
    // one ws frame -> one line
    tcp.write(text.replaceAll("\n", "") + "\n");
  });

  tcp.on("data", (chunk: Buffer) => {
    buffer = Buffer.concat([buffer, chunk]);
    let nl;
    while ((nl = buffer.indexOf(0x0a)) >= 0) {
      const line = buffer.subarray(0, nl).toString();
      buffer = buffer.subarray(nl + 1);
      if (ws.readyState === ws.OPEN) ws.send(line);
    }
  });

  const closeBoth = () => {
    tcp.destroy();
    if (ws.readyState === ws.OPEN) ws.close();
  };
  ws.on("close", closeBoth);
  ws.on("error", closeBoth);
  tcp.on("close", () => ws.close());
  tcp.on("error", () => ws.close());
}

export function startBridge(options: BridgeOptions): Promise<Bridge> {
  const staticDir =
    options.staticDir ??
    path.join(path.dirname(fileURLToPath(import.meta.url)), "..", "public");
  const server = http.createServer((req, res) =>
    serveStatic(staticDir, req, res),
  );
  const wss = new WebSocketServer({ server, path: "/ws" });
  wss.on("connection", (ws) =>
    pipeSession(ws, options.orchestratorHost, options.orchestratorPort),
  );
  return new Promise((resolve, reject) => {
    server.once("error", reject);
    server.listen(options.port, "127.0.0.1", () => {
      const address = server.address() as net.AddressInfo;
      resolve({
        port: address.port,
        close: () =>
          new Promise<void>((done) => {
            for (const client of wss.clients) client.terminate();
            wss.close(() => server.close(() => done()));
          }),
      });
    });
  });
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  const args = process.argv.slice(2);
  const get = (flag: string, fallback: string): string => {
    const i = args.indexOf(flag);
    return i >= 0 && args[i + 1] !== undefined ? args[i + 1] : fallback;
  };
  const [host, portText] = get("--orchestrator", "127.0.0.1:4840").split(":");
  startBridge({
    port: Number(get("--port", "8080")),
    orchestratorHost: host,
    orchestratorPort: Number(portText),
  }).then((bridge) => {
    console.log(`bridge on http://127.0.0.1:${bridge.port} -> ${host}:${portText}`);
  });
}
