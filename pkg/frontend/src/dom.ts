/**
 * Browser glue: wires DOM events to controller methods and repaints from
 * the controller's render strings after every change.  No model logic
 * lives here.
 */

import type { SessionController } from "./controller.js";
import type { Point } from "./layout.js";

interface Elements {
  tree: HTMLElement;
  canvas: HTMLElement;
  dialog: HTMLElement;
  status: HTMLElement;
}

export function mount(controller: SessionController, elements: Elements): () => void {
  const repaint = () => {
    elements.canvas.innerHTML = controller.renderCanvas();
    elements.dialog.innerHTML = controller.renderDialog();
    elements.tree.innerHTML = controller.renderTree();
    const notes = [...controller.warnings];
    if (controller.lastError) notes.push(controller.lastError);
    elements.status.textContent = notes.join(" — ");
  };

  const after = (work: Promise<void>) => {
    void work.then(repaint);
  };

  // drag a mechanism from the tree onto the canvas
  elements.tree.addEventListener("dragstart", (event) => {
    const item = (event.target as HTMLElement).closest("[data-mechanism]");
    if (item && event instanceof DragEvent && event.dataTransfer) {
      event.dataTransfer.setData("text/mechanism", item.getAttribute("data-mechanism")!);
    }
  });
  elements.canvas.addEventListener("dragover", (event) => event.preventDefault());
  elements.canvas.addEventListener("drop", (event) => {
    if (!(event instanceof DragEvent) || !event.dataTransfer) return;
    event.preventDefault();
    const path = event.dataTransfer.getData("text/mechanism");
    if (path) after(controller.dropMechanism(path));
  });

  // node dragging; dropping one node onto another merges them
  let dragging: { name: string; moved: boolean } | null = null;
  elements.canvas.addEventListener("pointerdown", (event) => {
    const node = (event.target as HTMLElement).closest("[data-node]");
    if (node) dragging = { name: node.getAttribute("data-node")!, moved: false };
  });
  elements.canvas.addEventListener("pointermove", (event) => {
    if (!dragging || controller.gesturesLocked()) return;
    dragging.moved = true;
    const rect = elements.canvas.getBoundingClientRect();
    const point: Point = { x: event.clientX - rect.left, y: event.clientY - rect.top };
    controller.moveNode(dragging.name, point);
    repaint();
  });
  elements.canvas.addEventListener("pointerup", (event) => {
    if (!dragging) return;
    const grabbed = dragging;
    dragging = null;
    const target = (event.target as HTMLElement).closest("[data-node]");
    const targetName = target?.getAttribute("data-node");
    if (targetName && targetName !== grabbed.name && grabbed.moved) {
      after(controller.mergeNodes(grabbed.name, targetName));
    } else if (!grabbed.moved) {
      controller.toggleSelect(grabbed.name);
      repaint();
    }
  });

  // context menu: designate a value for a variable
  elements.canvas.addEventListener("contextmenu", (event) => {
    const node = (event.target as HTMLElement).closest("[data-node]");
    if (!node) return;
    event.preventDefault();
    const name = node.getAttribute("data-node")!;
    const answer = window.prompt(`Set ${name} exogenous to value:`);
    if (answer === null) return;
    const value = Number(answer);
    if (Number.isFinite(value)) {
      after(controller.setExogenous(name, value));
    }
  });

  // release dialog
  elements.dialog.addEventListener("click", (event) => {
    const candidate = (event.target as HTMLElement).closest("[data-release]");
    if (candidate) {
      after(controller.release(candidate.getAttribute("data-release")!));
      return;
    }
    if ((event.target as HTMLElement).closest("[data-cancel-release]")) {
      after(controller.cancelRelease());
    }
  });

  repaint();
  return repaint;
}
