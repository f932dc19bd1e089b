/** DOM wiring: search panel, canvas, property inspector, view builder. */

import { ApiClient, NodeResponse, PropertyValue } from "./api";
import { ExplorerState, RenderedEdge } from "./explorer";
import { ViewBuilderState } from "./viewBuilder";

interface Bootstrap {
  apiBaseUrl: string;
}

interface Point {
  x: number;
  y: number;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function propertyList(properties: Record<string, PropertyValue>): HTMLElement {
  const list = el("dl", "properties");
  for (const [name, value] of Object.entries(properties)) {
    list.appendChild(el("dt", undefined, name));
    const values = Array.isArray(value) ? value : [value];
    for (const item of values) {
      list.appendChild(el("dd", undefined, item));
    }
  }
  return list;
}

/** Small deterministic force layout: a few relaxation rounds per render. */
function layout(
  nodeIds: string[],
  edges: RenderedEdge[],
  width: number,
  height: number,
): Map<string, Point> {
  const points = new Map<string, Point>();
  nodeIds.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(nodeIds.length, 1);
    points.set(id, {
      x: width / 2 + (width / 3) * Math.cos(angle),
      y: height / 2 + (height / 3) * Math.sin(angle),
    });
  });
  for (let round = 0; round < 60; round += 1) {
    // repulsion
    for (const a of nodeIds) {
      for (const b of nodeIds) {
        if (a >= b) continue;
        const pa = points.get(a)!;
        const pb = points.get(b)!;
        const dx = pb.x - pa.x;
        const dy = pb.y - pa.y;
        const dist = Math.max(Math.hypot(dx, dy), 1);
        const push = Math.min(2000 / (dist * dist), 5);
        pa.x -= (dx / dist) * push;
        pa.y -= (dy / dist) * push;
        pb.x += (dx / dist) * push;
        pb.y += (dy / dist) * push;
      }
    }
    // spring along edges
    for (const edge of edges) {
      const pa = points.get(edge.source);
      const pb = points.get(edge.target);
      if (!pa || !pb) continue;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(Math.hypot(dx, dy), 1);
      const pull = (dist - 120) * 0.02;
      pa.x += (dx / dist) * pull;
      pa.y += (dy / dist) * pull;
      pb.x -= (dx / dist) * pull;
      pb.y -= (dy / dist) * pull;
    }
    for (const p of points.values()) {
      p.x = Math.min(Math.max(p.x, 20), width - 20);
      p.y = Math.min(Math.max(p.y, 20), height - 20);
    }
  }
  return points;
}

export function startApp(root: HTMLElement, bootstrap: Bootstrap): void {
  const api = new ApiClient(bootstrap.apiBaseUrl);
  const explorer = new ExplorerState(api);
  const builder = new ViewBuilderState(api);

  root.innerHTML = "";
  const searchPanel = el("section", "search-panel");
  const canvasPanel = el("section", "canvas-panel");
  const inspector = el("section", "inspector");
  const viewPanel = el("section", "view-panel");
  root.append(searchPanel, canvasPanel, inspector, viewPanel);

  const notice = el("div", "notice");
  const searchInput = el("input");
  searchInput.placeholder = "Search nodes…";
  const searchButton = el("button", undefined, "Search");
  searchButton.disabled = true;
  const hits = el("ul", "hits");
  searchPanel.append(searchInput, searchButton, hits, notice);

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", "800");
  svg.setAttribute("height", "600");
  const truncatedBadge = el("span", "truncated-badge", "truncated");
  truncatedBadge.hidden = true;
  canvasPanel.append(svg, truncatedBadge);

  const showNotice = (message: string) => {
    notice.textContent = message;
  };

  const showNode = (node: NodeResponse) => {
    inspector.innerHTML = "";
    inspector.appendChild(el("h2", undefined, node.node_id));
    inspector.appendChild(el("p", undefined, node.node_labels.join(", ")));
    const link = el("a", undefined, node.node_uri);
    link.href = node.node_uri;
    inspector.appendChild(link);
    inspector.appendChild(propertyList(node.node_properties));
  };

  const showEdge = (edge: RenderedEdge) => {
    inspector.innerHTML = "";
    inspector.appendChild(
      el("h2", undefined, `${edge.source} —${edge.relationship_type}→ ${edge.target}`),
    );
    inspector.appendChild(propertyList(edge.relationship_properties));
  };

  const renderCanvas = () => {
    svg.innerHTML = "";
    const ids = [...explorer.nodes.keys()];
    const edges = [...explorer.edges.values()];
    const points = layout(ids, edges, 800, 600);
    for (const edge of edges) {
      const pa = points.get(edge.source);
      const pb = points.get(edge.target);
      if (!pa || !pb) continue;
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", String(pa.x));
      line.setAttribute("y1", String(pa.y));
      line.setAttribute("x2", String(pb.x));
      line.setAttribute("y2", String(pb.y));
      line.setAttribute("class", "edge");
      line.addEventListener("click", () => showEdge(edge));
      svg.appendChild(line);
    }
    for (const id of ids) {
      const p = points.get(id)!;
      const node = explorer.nodes.get(id)!;
      const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      circle.setAttribute("cx", String(p.x));
      circle.setAttribute("cy", String(p.y));
      circle.setAttribute("r", "9");
      circle.setAttribute("class", "node");
      circle.addEventListener("click", () => showNode(node));
      circle.addEventListener("dblclick", () => {
        explorer
          .expand(id)
          .then(renderCanvas)
          .catch((error) => showNotice(`expand failed: ${error}`));
      });
      svg.appendChild(circle);
      const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", String(p.x + 12));
      label.setAttribute("y", String(p.y + 4));
      label.textContent = id;
      svg.appendChild(label);
    }
    truncatedBadge.hidden = !explorer.truncated;
  };

  searchInput.addEventListener("input", () => {
    searchButton.disabled = searchInput.value.trim() === "";
  });
  const runSearch = async () => {
    hits.innerHTML = "";
    try {
      const results = await explorer.searchAndFocus(searchInput.value);
      if (results.length === 0) {
        hits.appendChild(el("li", "empty", "no matches"));
        return;
      }
      for (const result of results) {
        const item = el("li", undefined, result.node_id);
        item.addEventListener("click", async () => {
          try {
            const node = await explorer.focus(result.node_id);
            showNode(node);
            renderCanvas();
          } catch (error) {
            showNotice(`load failed: ${error}`);
          }
        });
        hits.appendChild(item);
      }
    } catch (error) {
      showNotice(`search failed: ${error}`);
    }
  };
  searchButton.addEventListener("click", () => void runSearch());

  // view builder
  const labelsBox = el("fieldset", "labels");
  labelsBox.appendChild(el("legend", undefined, "Node labels"));
  const predicatesBox = el("fieldset", "predicates");
  predicatesBox.appendChild(el("legend", undefined, "Edge predicates"));
  const filterInput = el("input");
  filterInput.placeholder = 'Property filter, e.g. "western blotting" IN r.Method';
  const previewBox = el("div", "preview", "no selection");
  const downloadButton = el("button", undefined, "Download CSV");
  downloadButton.disabled = true;
  viewPanel.append(labelsBox, predicatesBox, filterInput, previewBox, downloadButton);

  const refresh = async () => {
    downloadButton.disabled = !builder.downloadEnabled;
    try {
      const counts = await builder.refreshPreview();
      previewBox.textContent = counts
        ? `${counts.nodeCount} nodes, ${counts.edgeCount} edges`
        : "no selection";
    } catch (error) {
      showNotice(`preview failed: ${error}`);
    }
  };

  api
    .schema()
    .then((schema) => {
      for (const label of Object.keys(schema.labels).sort()) {
        const box = el("label", undefined, label);
        const check = el("input");
        check.type = "checkbox";
        check.addEventListener("change", () => {
          builder.toggleLabel(label);
          void refresh();
        });
        box.prepend(check);
        labelsBox.appendChild(box);
      }
      for (const predicate of Object.keys(schema.predicates).sort()) {
        const box = el("label", undefined, predicate);
        const check = el("input");
        check.type = "checkbox";
        check.addEventListener("change", () => {
          builder.togglePredicate(predicate);
          void refresh();
        });
        box.prepend(check);
        predicatesBox.appendChild(box);
      }
    })
    .catch((error) => showNotice(`schema failed: ${error}`));

  filterInput.addEventListener("change", () => {
    builder.propertyFilter = filterInput.value.trim() || null;
  });

  downloadButton.addEventListener("click", async () => {
    try {
      const bytes = await builder.download();
      const blob = new Blob([bytes.buffer as ArrayBuffer], { type: "application/zip" });
      const url = URL.createObjectURL(blob);
      const anchor = el("a");
      anchor.href = url;
      anchor.download = "view.zip";
      anchor.click();
      URL.revokeObjectURL(url);
    } catch (error) {
      showNotice(`download failed: ${error}`);
    } finally {
      downloadButton.disabled = !builder.downloadEnabled;
    }
  });
}

declare global {
  interface Window {
    KGFORGE_BOOTSTRAP?: Bootstrap;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(document.getElementById("app")!, window.KGFORGE_BOOTSTRAP ?? { apiBaseUrl: "" });
}
