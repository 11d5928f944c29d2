import type { Scene } from "./scene.js";

/** Paint a computed scene onto a 2D canvas context. All geometry decisions
 * happen in computeScene; this stays a dumb pixel pusher. */
export function paint(ctx: CanvasRenderingContext2D, scene: Scene, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 1;
  for (const edge of scene.edges) {
    ctx.strokeStyle = edge.color;
    ctx.beginPath();
    ctx.moveTo(edge.x1, edge.y1);
    ctx.lineTo(edge.x2, edge.y2);
    ctx.stroke();
  }
  for (const node of scene.nodes) {
    ctx.beginPath();
    ctx.arc(node.x, node.y, node.radius, 0, Math.PI * 2);
    ctx.fillStyle = node.color;
    ctx.fill();
    if (node.pinned) {
      ctx.strokeStyle = "#0b3d61";
      ctx.lineWidth = 2;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
    if (node.highlighted) {
      ctx.beginPath();
      ctx.arc(node.x, node.y, node.radius + 4, 0, Math.PI * 2);
      ctx.strokeStyle = "#d62728";
      ctx.lineWidth = 2;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
    if (node.kind === "attribute") {
      ctx.fillStyle = "#222";
      ctx.font = "12px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(node.label, node.x, node.y - node.radius - 4);
    }
  }
}
