// DOM rendering.  Pure function of the view model; all handlers delegate to
// the controller, which talks to the service.

import type { ViewModel } from "./types.js";

export interface Handlers {
  onUpload(text: string): void;
  onStart(role: "exists" | "forall"): void;
  onPlay(value: number): void;
  onWhatIf(value: number): void;
}

const QUANTIFIER_GLYPH = { exists: "∃", forall: "∀" } as const;

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => `&#${ch.charCodeAt(0)};`);
}

function binderStrip(vm: ViewModel): string {
  if (!vm.problem) return "";
  const currentRank = vm.session?.turn?.rank ?? 0;
  const chips = vm.problem.variables
    .map((v, i) => {
      const active = i + 1 === currentRank ? " active" : "";
      return `<span class="chip${active}">${QUANTIFIER_GLYPH[v.quantifier]}${escapeHtml(
        v.name,
      )} ∈ {${v.domain.join(",")}}</span>`;
    })
    .join(" ");
  return `<div class="binder">${chips}</div>`;
}

function prefixList(vm: ViewModel): string {
  const session = vm.session;
  if (!session) return "";
  if (session.prefix.length === 0) return `<p class="moves">no moves yet</p>`;
  const moves = session.prefix
    .map((m) => `<li>${escapeHtml(m.name)} = ${m.value}</li>`)
    .join("");
  return `<ol class="moves">${moves}</ol>`;
}

function turnPanel(vm: ViewModel): string {
  const session = vm.session;
  if (!session || session.status !== "ONGOING" || !session.turn) return "";
  const turn = session.turn;
  if (!turn.human) {
    return `<p>waiting for the engine at <b>${escapeHtml(turn.name)}</b>…</p>`;
  }
  const buttons = turn.domain
    .map((value) => {
      const badge = vm.badges.get(value) ?? "off-base";
      const explored = vm.whatIf.get(value);
      const chip =
        explored === undefined
          ? ""
          : `<span class="verdict">${explored ? "still winnable" : "already lost"}</span>`;
      return `
        <div class="candidate badge-${badge}">
          <button data-play="${value}">play ${value}</button>
          <button data-whatif="${value}" class="whatif">what if?</button>
          <span class="badge">${badge}</span>${chip}
        </div>`;
    })
    .join("");
  const glyph = QUANTIFIER_GLYPH[turn.quantifier];
  return `<h3>your turn: ${glyph}${escapeHtml(turn.name)}</h3><div class="candidates">${buttons}</div>`;
}

export function render(root: HTMLElement, vm: ViewModel, handlers: Handlers): void {
  const sections: string[] = [];
  sections.push(`
    <section>
      <h2>1. problem</h2>
      <textarea id="problem-input" rows="8" spellcheck="false"
        placeholder="paste problem JSON here"></textarea>
      <button id="upload">upload &amp; compile</button>
    </section>`);
  if (vm.winning !== null) {
    const verdict = vm.winning ? "winning: yes" : "winning: no — play disabled";
    const stats = vm.stats
      ? Object.entries(vm.stats)
          .map(([k, v]) => `${k.replaceAll("_", " ")}: ${v}`)
          .join(" · ")
      : "";
    sections.push(`
      <section>
        <h2>2. compiled base</h2>
        ${binderStrip(vm)}
        <p class="banner ${vm.winning ? "good" : "bad"}">${verdict}</p>
        <p class="stats">${stats}</p>
        ${
          vm.winning
            ? `<button id="start-exists">play the existential side</button>
               <button id="start-forall">play the universal side</button>`
            : ""
        }
      </section>`);
  }
  if (vm.session) {
    const banner = vm.banner
      ? `<p class="banner ${vm.banner === "WON" ? "good" : "bad"}">${vm.banner}</p>`
      : "";
    sections.push(`
      <section>
        <h2>3. play</h2>
        ${prefixList(vm)}
        ${turnPanel(vm)}
        ${banner}
      </section>`);
  }
  if (vm.error) sections.push(`<p class="error">${escapeHtml(vm.error)}</p>`);

  root.innerHTML = sections.join("\n");

  const input = root.querySelector<HTMLTextAreaElement>("#problem-input");
  root.querySelector("#upload")?.addEventListener("click", () => {
    if (input) handlers.onUpload(input.value);
  });
  root.querySelector("#start-exists")?.addEventListener("click", () => handlers.onStart("exists"));
  root.querySelector("#start-forall")?.addEventListener("click", () => handlers.onStart("forall"));
  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-play]")) {
    button.addEventListener("click", () => handlers.onPlay(Number(button.dataset.play)));
  }
  for (const button of root.querySelectorAll<HTMLButtonElement>("[data-whatif]")) {
    button.addEventListener("click", () => handlers.onWhatIf(Number(button.dataset.whatif)));
  }
}
