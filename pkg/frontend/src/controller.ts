/**
 * Session state machine.  Every user gesture maps to exactly one action
 * POST; the canvas always re-renders from the last graph document the
 * service returned, never from client-side inference.  One action is in
 * flight at a time, and while a release dialog is open every gesture
 * except release/cancel is refused locally (the server enforces the same
 * rule with 409).
 */

import { Api, ApiError } from "./api.js";
import type { ActionRequest, ActionResponse, GraphDocument, KbFolder } from "./api.js";
import { layeredLayout, mergeLayout, type Point } from "./layout.js";
import { dialogMarkup, graphSvg, treeMarkup, type DialogState } from "./render.js";

export class SessionController {
  session: string | null = null;
  graph: GraphDocument | null = null;
  tree: KbFolder | null = null;
  dialog: DialogState | null = null;
  positions: Map<string, Point> = new Map();
  selection: Set<string> = new Set();
  warnings: string[] = [];
  lastError: string | null = null;
  busy = false;

  constructor(private readonly api: Api) {}

  async boot(model?: string): Promise<void> {
    this.tree = await this.api.kbTree();
    const created = await this.api.createSession(model);
    this.session = created.session;
    this.setGraph(created.graph);
  }

  private setGraph(doc: GraphDocument): void {
    this.graph = doc;
    this.positions = this.positions.size
      ? mergeLayout(doc, this.positions)
      : layeredLayout(doc);
    for (const name of [...this.selection]) {
      if (!doc.nodes.some((node) => node.name === name)) {
        this.selection.delete(name);
      }
    }
  }

  /** Canvas gestures are disabled while an action is pending or in flight. */
  gesturesLocked(): boolean {
    return this.busy || this.dialog !== null;
  }

  private async post(body: ActionRequest): Promise<ActionResponse | null> {
    if (this.session === null || this.busy) {
      return null;
    }
    this.busy = true;
    this.lastError = null;
    try {
      const result = await this.api.action(this.session, body);
      this.warnings = result.warnings;
      this.applyResult(body, result);
      return result;
    } catch (error) {
      this.lastError = error instanceof ApiError ? error.message : String(error);
      return null;
    } finally {
      this.busy = false;
    }
  }

  private applyResult(body: ActionRequest, result: ActionResponse): void {
    if (result.status === "applied") {
      this.dialog = null;
      this.setGraph(result.graph);
      return;
    }
    if (result.status === "needs-release") {
      this.dialog = {
        description: describeAction(body),
        candidates: result.candidates ?? [],
        rejection: null,
      };
      // the visible graph is still the last consistent one
      this.setGraph(result.graph);
      return;
    }
    // rejected: dialog (if any) stays open and shows the reason
    if (this.dialog) {
      this.dialog.rejection = result.reason;
    } else {
      this.lastError = result.reason;
    }
  }

  async dropMechanism(path: string): Promise<void> {
    if (this.gesturesLocked()) return;
    await this.post({ action: "add-mechanism", path });
  }

  async mergeNodes(source: string, target: string): Promise<void> {
    if (this.gesturesLocked() || source === target) return;
    await this.post({ action: "merge", source, target });
  }

  async setExogenous(variable: string, value: number): Promise<void> {
    if (this.gesturesLocked()) return;
    await this.post({ action: "set-exogenous", variable, value });
  }

  async release(equation: string): Promise<void> {
    if (this.busy || this.dialog === null) return;
    await this.post({ action: "release", equation });
  }

  async cancelRelease(): Promise<void> {
    if (this.busy || this.dialog === null) return;
    const result = await this.post({ action: "cancel" });
    if (result && result.status === "applied") {
      this.dialog = null;
    }
  }

  async extractSelection(dest: string): Promise<void> {
    if (this.gesturesLocked() || this.selection.size === 0) return;
    const variables = [...this.selection].sort();
    const result = await this.post({ action: "extract", variables, dest });
    if (result && result.status === "applied") {
      this.tree = await this.api.kbTree();
    }
  }

  toggleSelect(name: string): void {
    if (this.selection.has(name)) {
      this.selection.delete(name);
    } else {
      this.selection.add(name);
    }
  }

  moveNode(name: string, point: Point): void {
    if (this.positions.has(name)) {
      this.positions.set(name, point);
    }
  }

  renderCanvas(): string {
    if (this.graph === null) {
      return "<svg xmlns=\"http://www.w3.org/2000/svg\"></svg>";
    }
    return graphSvg(this.graph, this.positions, this.selection);
  }

  renderDialog(): string {
    return dialogMarkup(this.dialog);
  }

  renderTree(): string {
    return this.tree ? treeMarkup(this.tree) : "<ul></ul>";
  }
}

function describeAction(body: ActionRequest): string {
  switch (body.action) {
    case "set-exogenous":
      return `Setting ${body.variable} = ${body.value}`;
    case "add-mechanism":
      return `Adding mechanism ${body.path}`;
    case "merge":
      return `Merging ${body.source} into ${body.target}`;
    default:
      return body.action;
  }
}
