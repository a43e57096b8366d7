import { Api } from "./api.js";
import { SessionController } from "./controller.js";
import { mount } from "./dom.js";

async function start(): Promise<void> {
  const api = new Api("");
  const controller = new SessionController(api);
  await controller.boot();
  const repaint = mount(controller, {
    tree: document.getElementById("kb-tree")!,
    canvas: document.getElementById("canvas")!,
    dialog: document.getElementById("dialog")!,
    status: document.getElementById("status")!,
  });

  const extractButton = document.getElementById("extract")!;
  extractButton.addEventListener("click", () => {
    const dest = window.prompt("Extract selected variables to KB folder:");
    if (dest) {
      void controller.extractSelection(dest).then(repaint);
    }
  });
}

void start();
