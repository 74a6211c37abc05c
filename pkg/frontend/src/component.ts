// View-model for the component-wide PO runner: a selectable PO list, one
// sequential evaluation run at a time, and an append-only result log.

import { ApiError, WorkbenchClient } from "./api.js";
import {
  DEFAULT_PARAMS,
  FlagStringError,
  type ParamsState,
  parseFlagString,
  renderFlagString,
  toParamsJson,
} from "./params.js";
import type { PipelineReport, PoRow, Verdict } from "./types.js";

export interface RunRow extends PoRow {
  selected: boolean;
  /* transient, per-run; never part of the reconstructable state */
  verdict: Verdict | null;
  note: string;
}

/* The projection that must be reconstructable from a fresh GET. */
export interface ComponentSnapshot {
  component: string;
  rows: PoRow[];
  selected: string[];
}

export class ComponentView {
  private client: WorkbenchClient;

  component: string | null = null;
  rows: RunRow[] = [];
  resultLog: string[] = [];
  lastReport: PipelineReport | null = null;

  paramsText: string = renderFlagString(DEFAULT_PARAMS);
  paramsError: string | null = null;
  private paramsState: ParamsState = { ...DEFAULT_PARAMS };

  addRule = false;
  running = false;
  private controller: AbortController | null = null;
  private cancelRequested = false;

  constructor(client: WorkbenchClient) {
    this.client = client;
  }

  get params(): ParamsState {
    return { ...this.paramsState };
  }

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

  /* Load (or reload) from the server; unproved POs come pre-selected. */
  async load(component: string): Promise<void> {
    const pos = await this.client.pos(component, "all");
    this.component = component;
    this.rows = pos.map((po) => ({
      ...po,
      selected: po.status === "UNPROVED",
      verdict: null,
      note: "",
    }));
  }

  async refresh(): Promise<void> {
    if (this.component === null) return;
    await this.load(this.component);
  }

  toggleSelected(name: string): void {
    const row = this.rows.find((r) => r.name === name);
    if (row) row.selected = !row.selected;
  }

  selectedRows(): RunRow[] {
    return this.rows.filter((r) => r.selected);
  }

  canRun(): boolean {
    return (
      !this.running &&
      this.component !== null &&
      this.selectedRows().length > 0 &&
      this.paramsError === null
    );
  }

  cancel(): void {
    this.cancelRequested = true;
    this.controller?.abort();
  }

  snapshot(): ComponentSnapshot {
    return {
      component: this.component ?? "",
      rows: this.rows.map(({ name, group, status, provenance, hypotheses, goal }) => ({
        name,
        group,
        status,
        provenance,
        hypotheses: [...hypotheses],
        goal,
      })),
      selected: this.rows.filter((r) => r.selected).map((r) => r.name),
    };
  }

  /* One PO at a time, in list order, so the log is deterministic. A failed
     request marks its row and the run moves on; cancel stops the run. */
  async runSelected(): Promise<void> {
    if (!this.canRun() || this.component === null) return;
    this.running = true;
    this.cancelRequested = false;
    try {
      for (const row of this.rows) {
        if (!row.selected) continue;
        if (this.cancelRequested) {
          row.verdict = null;
          row.note = "cancelled";
          this.pushLog(`"${row.name}": cancelled`);
          continue;
        }
        this.controller = new AbortController();
        try {
          const res = await this.client.evalGoal(
            {
              goal: row.goal,
              hypotheses: [...row.hypotheses],
              params: toParamsJson(this.paramsState),
              component: this.component,
              po_name: row.name,
              add_rule: this.addRule,
              wd: this.addRule && row.group === "wd",
            },
            this.controller.signal,
          );
          row.verdict = res.verdict;
          let line = `"${row.name}": ${res.verdict}`;
          if (res.reason) line += ` (${res.reason})`;
          line += ` in ${res.elapsed_ms} ms`;
          if (res.counterexample) {
            const ce = Object.entries(res.counterexample)
              .map(([k, v]) => `${k} = ${v}`)
              .join(", ");
            line += ` [${ce}]`;
          }
          if (res.rule?.added) {
            line += ` [rule ${res.rule.theory_name} -> ${res.rule.file}]`;
            row.note = `rule ${res.rule.theory_name}`;
          }
          this.pushLog(line);
        } catch (e) {
          if ((e as Error).name === "AbortError") {
            row.verdict = null;
            row.note = "cancelled";
            this.pushLog(`"${row.name}": cancelled`);
          } else {
            const msg = e instanceof ApiError ? `${e.code}: ${e.message}` : (e as Error).message;
            row.verdict = null;
            row.note = `error: ${msg}`;
            this.pushLog(`"${row.name}": error (${msg})`);
          }
        } finally {
          this.controller = null;
        }
      }
    } finally {
      this.running = false;
      this.cancelRequested = false;
    }
  }

  async runPipeline(emitRules: boolean): Promise<void> {
    if (this.running || this.component === null) return;
    this.running = true;
    try {
      this.lastReport = await this.client.pipeline(this.component, {
        params: toParamsJson(this.paramsState),
        emit_rules: emitRules,
      });
      for (const line of this.lastReport.table.split("\n")) {
        this.pushLog(line);
      }
      await this.refresh();
    } catch (e) {
      const msg = e instanceof ApiError ? `${e.code}: ${e.message}` : (e as Error).message;
      this.pushLog(`pipeline error (${msg})`);
    } finally {
      this.running = false;
    }
  }

  private pushLog(line: string): void {
    this.resultLog = [...this.resultLog, line];
  }
}
