// Bootstrap: wire the controller to the page and re-render after each step.

import { GameController } from "./controller.js";
import type { ProblemDoc } from "./types.js";
import { render } from "./view.js";

const params = new URLSearchParams(window.location.search);
const serviceUrl =
  params.get("service") ??
  window.localStorage.getItem("qcsp-service-url") ??
  "http://127.0.0.1:8000";
window.localStorage.setItem("qcsp-service-url", serviceUrl);

const controller = new GameController(serviceUrl);
const root = document.getElementById("app") as HTMLElement;

function repaint(): void {
  render(root, controller.vm, {
    onUpload(text) {
      let doc: ProblemDoc;
      try {
        doc = JSON.parse(text) as ProblemDoc;
      } catch (err) {
        controller.vm.error = `invalid JSON: ${(err as Error).message}`;
        repaint();
        return;
      }
      void controller.loadProblemAndCompile(doc).then(repaint);
    },
    onStart(role) {
      void controller.startGame(role).then(repaint);
    },
    onPlay(value) {
      void controller.playTurn(value).then(repaint);
    },
    onWhatIf(value) {
      void controller.whatIf(value).then(repaint);
    },
  });
}

document.title = `quantified game — ${serviceUrl}`;
repaint();
