// View-model for the single-expression evaluator panel. Pure state plus a
// client; all invariants live here so the DOM layer stays a dumb projection.

import { ApiError, WorkbenchClient } from "./api.js";
import {
  DEFAULT_PARAMS,
  FlagStringError,
  type ParamsState,
  parseFlagString,
  renderFlagString,
  toParamsJson,
} from "./params.js";
import type { EvalRequest, EvalResponse } from "./types.js";

export type EvalFailure =
  | { kind: "parse"; message: string; where: string; line: number; col: number }
  | { kind: "api"; code: string; message: string }
  | { kind: "network"; message: string }
  | { kind: "cancelled" };

export class IndividualView {
  private client: WorkbenchClient;

  paramsText: string = renderFlagString(DEFAULT_PARAMS);
  paramsError: string | null = null;
  private paramsState: ParamsState = { ...DEFAULT_PARAMS };

  component: string | null = null;
  poName: string | null = null;
  hypotheses: ReadonlyArray<string> = [];

  goalText = "";
  addRule = false;
  wdPo = false;

  inFlight = false;
  lastResult: EvalResponse | null = null;
  lastFailure: EvalFailure | null = null;
  private controller: AbortController | null = null;

  constructor(client: WorkbenchClient) {
    this.client = client;
  }

  get params(): ParamsState {
    return { ...this.paramsState };
  }

  /* Text is the source of truth while it parses; checkboxes follow. */
  setParamsText(text: string): void {
    this.paramsText = text;
    try {
      this.paramsState = parseFlagString(text);
      this.paramsError = null;
    } catch (e) {
      if (!(e instanceof FlagStringError)) throw e;
      this.paramsError = e.message;
    }
  }

  /* A checkbox flip rewrites the text from the last good state. */
  private setFlag(name: "init" | "kodkod" | "smt", on: boolean): void {
    this.paramsState = { ...this.paramsState, [name]: on };
    this.paramsText = renderFlagString(this.paramsState);
    this.paramsError = null;
  }

  setInit(on: boolean): void {
    this.setFlag("init", on);
  }

  setKodkod(on: boolean): void {
    this.setFlag("kodkod", on);
  }

  setSmt(on: boolean): void {
    this.setFlag("smt", on);
  }

  setGoalText(text: string): void {
    this.goalText = text;
  }

  async loadPo(component: string, poName: string): Promise<void> {
    const rows = await this.client.pos(component, "all");
    const row = rows.find((r) => r.name === poName);
    if (!row) {
      throw new Error(`no PO named ${poName} in ${component}`);
    }
    this.component = component;
    this.poName = poName;
    this.hypotheses = [...row.hypotheses];
    this.goalText = row.goal;
    this.wdPo = row.group === "wd";
    this.lastResult = null;
    this.lastFailure = null;
  }

  /* The hypothesis panel is read-only; this is its one action. Copying
     prepends the hypothesis as an antecedent so equalities can bind. */
  copyHypothesisToGoal(index: number): void {
    const hyp = this.hypotheses[index];
    if (hyp === undefined) return;
    this.goalText = this.goalText.trim()
      ? `${hyp} => (${this.goalText})`
      : hyp;
  }

  canEval(): boolean {
    return !this.inFlight && this.goalText.trim() !== "" && this.paramsError === null;
  }

  /* Rule emission is only ever offered on a TRUE verdict. */
  canOfferRule(): boolean {
    return (
      !this.inFlight &&
      this.lastResult !== null &&
      this.lastResult.verdict === "TRUE" &&
      this.component !== null
    );
  }

  cancel(): void {
    this.controller?.abort();
  }

  async evaluate(): Promise<void> {
    if (!this.canEval()) return;
    await this.post(this.addRule);
  }

  /* Re-posts the last goal with add_rule set; guarded by canOfferRule. */
  async addRuleFromLastResult(): Promise<void> {
    if (!this.canOfferRule()) return;
    await this.post(true);
  }

  private async post(addRule: boolean): Promise<void> {
    const req: EvalRequest = {
      goal: this.goalText,
      params: toParamsJson(this.paramsState),
    };
    if (this.component !== null) {
      req.component = this.component;
      if (this.poName !== null) req.po_name = this.poName;
    }
    if (addRule && this.component !== null) {
      req.add_rule = true;
      // wd_po only takes effect when a rule is actually requested
      req.wd = this.wdPo;
    }
    this.inFlight = true;
    this.lastFailure = null;
    this.controller = new AbortController();
    try {
      this.lastResult = await this.client.evalGoal(req, this.controller.signal);
    } catch (e) {
      if (e instanceof ApiError) {
        if (e.code === "parse-error") {
          this.lastFailure = {
            kind: "parse",
            message: e.message,
            where: e.where ?? "goal",
            line: e.line ?? 1,
            col: e.col ?? 1,
          };
        } else {
          this.lastFailure = { kind: "api", code: e.code, message: e.message };
        }
      } else if ((e as Error).name === "AbortError") {
        this.lastFailure = { kind: "cancelled" };
      } else {
        this.lastFailure = { kind: "network", message: (e as Error).message };
      }
    } finally {
      this.inFlight = false;
      this.controller = null;
    }
  }
}
