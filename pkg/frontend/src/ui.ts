/**
 * Browser entry point: renders the clickable board from the view-model
 * and speaks the envelope protocol over the /ws bridge. The board shown
 * is always the last server state_update; clicks only compose moves.
 */

import { POINTS, type Point } from "./hints.js";
import { decodeEnvelope, encodeEnvelope, IdCounter } from "./protocol.js";
import { SessionViewModel } from "./viewmodel.js";

const GRID: Record<string, [number, number]> = {
  a1: [0, 6], d1: [3, 6], g1: [6, 6],
  b2: [1, 5], d2: [3, 5], f2: [5, 5],
  c3: [2, 4], d3: [3, 4], e3: [4, 4],
  a4: [0, 3], b4: [1, 3], c4: [2, 3],
  e4: [4, 3], f4: [5, 3], g4: [6, 3],
  c5: [2, 2], d5: [3, 2], e5: [4, 2],
  b6: [1, 1], d6: [3, 1], f6: [5, 1],
  a7: [0, 0], d7: [3, 0], g7: [6, 0],
};

const EDGES: [string, string][] = [
  ["a1", "g1"], ["g1", "g7"], ["g7", "a7"], ["a7", "a1"],
  ["b2", "f2"], ["f2", "f6"], ["f6", "b6"], ["b6", "b2"],
  ["c3", "e3"], ["e3", "e5"], ["e5", "c5"], ["c5", "c3"],
  ["d1", "d3"], ["d5", "d7"], ["a4", "c4"], ["e4", "g4"],
];

function xy(point: string): [number, number] {
  const [gx, gy] = GRID[point];
  return [50 + gx * 100, 50 + gy * 100];
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  parent: Element,
  cls?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  parent.appendChild(node);
  return node;
}

function main(): void {
  const app = document.getElementById("app")!;
  const header = el("div", app, "header");
  const banner = el("div", app, "banner");
  const svgHolder = el("div", app, "board");
  const cellsBar = el("div", app, "cells");
  const procList = el("div", app, "processes");

  const vm = new SessionViewModel();
  const ids = new IdCounter();
  const params = new URLSearchParams(location.search);
  const color = params.get("color") ?? "any";

  const ws = new WebSocket(`ws://${location.host}/ws`);
  const send = (kind: string, body: Record<string, unknown>, re?: number) =>
    ws.send(encodeEnvelope({ id: ids.take(), kind, body, re }));

  ws.onopen = () => {
    send("hello", { client: `browser-${Math.floor(Math.random() * 1e6)}` });
    if (color !== "spectator") send("join_game", { color });
  };
  ws.onmessage = (event) => {
    const env = decodeEnvelope(String(event.data));
    if (env.kind === "ping") {
      send("pong", {}, env.id);
      return;
    }
    vm.apply(env);
  };
  ws.onclose = () => {
    banner.textContent = "connection closed";
  };

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", "0 0 700 700");
  svgHolder.appendChild(svg);
  for (const [a, b] of EDGES) {
    const line = document.createElementNS(svg.namespaceURI, "line");
    const [x1, y1] = xy(a);
    const [x2, y2] = xy(b);
    line.setAttribute("x1", String(x1));
    line.setAttribute("y1", String(y1));
    line.setAttribute("x2", String(x2));
    line.setAttribute("y2", String(y2));
    line.setAttribute("class", "edge");
    svg.appendChild(line);
  }
  const circles = new Map<string, SVGCircleElement>();
  for (const point of POINTS) {
    const circle = document.createElementNS(
      svg.namespaceURI,
      "circle",
    ) as SVGCircleElement;
    const [cx, cy] = xy(point);
    circle.setAttribute("cx", String(cx));
    circle.setAttribute("cy", String(cy));
    circle.setAttribute("r", "22");
    circle.addEventListener("click", () => {
      const move = vm.clickPoint(point as Point);
      if (move !== null) {
        send("submit_move", { move });
        vm.submitted();
      }
    });
    const label = document.createElementNS(svg.namespaceURI, "text");
    label.setAttribute("x", String(cx));
    label.setAttribute("y", String(cy + 40));
    label.setAttribute("class", "label");
    label.textContent = point;
    svg.appendChild(circle);
    svg.appendChild(label);
    circles.set(point, circle);
  }

  function render(): void {
    const board = vm.board();
    const highlights = new Set(vm.highlights());
    POINTS.forEach((point, i) => {
      const circle = circles.get(point)!;
      const cell = board[i];
      let cls = cell === "W" ? "white" : cell === "B" ? "black" : "empty";
      if (highlights.has(point)) cls += " hint";
      if (vm.selection.from === point || vm.selection.to === point) {
        cls += " selected";
      }
      circle.setAttribute("class", cls);
    });
    const seatNote =
      vm.seat === "spectator" ? "spectating" : `you are ${vm.seat}`;
    const turn = vm.toMove === "W" ? "white" : "black";
    header.textContent =
      `${seatNote} | ply ${Math.max(vm.ply, 0)} | ${turn} to move | ` +
      `${vm.status}` + (vm.lastMove ? ` | last ${vm.lastMove}` : "");
    banner.textContent = vm.selection.awaitingRemoval
      ? "mill! choose an opponent token to remove"
      : vm.banner ?? "";
    cellsBar.textContent = Object.entries(vm.cells)
      .map(([id, badge]) => `${id} [${badge.status}]`)
      .join("   ");
    procList.innerHTML = "";
    for (const proc of vm.processLog.slice(-8).reverse()) {
      const row = el("div", procList, `proc ${proc.state}`);
      row.textContent =
        `#${proc.pid} ${proc.move ?? ""} -> ${proc.state}` +
        (proc.reason ? ` (${proc.reason})` : "") +
        (proc.failure ? ` (${proc.failure})` : "") +
        (proc.noCells ? " [no cells]" : "");
    }
  }

  vm.onChange(render);
  render();
}

main();
