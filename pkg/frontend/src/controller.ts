// Session state machine.  Holds the view model and mutates it only from
// service responses: badges are the winning-moves set verbatim, the prefix
// is the server session prefix verbatim, banners follow the server status.

import { ApiClient, ApiRequestError } from "./api.js";
import type { Badge, ProblemDoc, QuantifierName, ViewModel } from "./types.js";
import { emptyViewModel } from "./types.js";

export class GameController {
  readonly vm: ViewModel;
  private readonly api: ApiClient;

  constructor(serviceUrl: string, api?: ApiClient) {
    this.vm = emptyViewModel(serviceUrl);
    this.api = api ?? new ApiClient(serviceUrl);
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    this.vm.error = null;
    this.vm.busy = true;
    try {
      return await work();
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.vm.error = `${err.code}: ${err.message}`;
      } else if (err instanceof Error) {
        this.vm.error = err.message;
      } else {
        this.vm.error = String(err);
      }
      return null;
    } finally {
      this.vm.busy = false;
    }
  }

  /** Upload a problem document and compile it; play stays disabled when the
   * verdict is "no winning strategy". */
  async loadProblemAndCompile(doc: ProblemDoc): Promise<void> {
    await this.guarded(async () => {
      this.vm.problem = null;
      this.vm.session = null;
      this.vm.badges = new Map();
      this.vm.whatIf = new Map();
      this.vm.banner = null;
      const { id } = await this.api.postProblem(doc);
      const compiled = await this.api.compile(id);
      this.vm.problem = await this.api.getProblem(id);
      this.vm.problemId = id;
      this.vm.baseId = compiled.base_id;
      this.vm.winning = compiled.winning;
      this.vm.stats = compiled.stats;
    });
  }

  async startGame(humanRole: QuantifierName): Promise<void> {
    await this.guarded(async () => {
      if (!this.vm.baseId) throw new Error("compile a problem first");
      this.vm.banner = null;
      this.vm.whatIf = new Map();
      this.vm.session = await this.api.createGame(this.vm.baseId, humanRole);
      await this.syncBadges();
    });
  }

  /** Commit a move; the response already contains the engine's replies. */
  async playTurn(value: number): Promise<void> {
    await this.guarded(async () => {
      const session = this.vm.session;
      if (!session) throw new Error("no game in progress");
      this.vm.session = await this.api.move(session.id, value);
      this.vm.whatIf = new Map();
      await this.syncBadges();
    });
  }

  /** Ask, without committing, whether a value keeps the win available. */
  async whatIf(value: number): Promise<boolean | null> {
    return await this.guarded(async () => {
      const session = this.vm.session;
      if (!session) throw new Error("no game in progress");
      const verdict = await this.api.whatIf(session.id, value);
      this.vm.whatIf.set(value, verdict.winning);
      return verdict.winning;
    });
  }

  /** Badges shown on the human's turn: exactly the winning-moves response. */
  private async syncBadges(): Promise<void> {
    const session = this.vm.session;
    this.vm.badges = new Map();
    if (!session) return;
    if (session.status !== "ONGOING") {
      this.vm.banner = session.status;
      return;
    }
    this.vm.banner = null;
    const turn = session.turn;
    if (!turn || !turn.human) return;
    const { values } = await this.api.winningMoves(session.id);
    const safe = new Set(values);
    const badges = new Map<number, Badge>();
    for (const value of turn.domain) {
      if (safe.has(value)) badges.set(value, "winnable");
      else badges.set(value, safe.size === 0 ? "off-base" : "losing");
    }
    this.vm.badges = badges;
  }
}
