// Flag-string codec. The text box and the checkboxes are two views of the
// same ParamsState; the encoding must match the server's echo byte for byte
// or the round-trip invariant breaks.

import type { ParamsJson } from "./types.js";

export interface ParamsState {
  minint: number;
  maxint: number;
  timeoutMs: number;
  init: boolean;
  kodkod: boolean;
  smt: boolean;
  clpfd: boolean;
}

export const DEFAULT_PARAMS: ParamsState = {
  minint: -65536,
  maxint: 65536,
  timeoutMs: 10000,
  init: false,
  kodkod: false,
  smt: false,
  clpfd: false,
};

export class FlagStringError extends Error {}

/* Bounds always print; strategy flags print only when set. */
export function renderFlagString(p: ParamsState): string {
  const parts = [
    `-p MAXINT ${p.maxint}`,
    `-p MININT ${p.minint}`,
    `-p TIME_OUT ${p.timeoutMs}`,
  ];
  if (p.init) parts.push("-p init");
  if (p.kodkod) parts.push("-p KODKOD TRUE");
  if (p.smt) parts.push("-p SMT TRUE");
  if (p.clpfd) parts.push("-p CLPFD TRUE");
  return parts.join(" ");
}

function parseInt10(name: string, raw: string): number {
  if (!/^-?\d+$/.test(raw)) {
    throw new FlagStringError(`-p ${name} takes an integer, got '${raw}'`);
  }
  return Number(raw);
}

export function parseFlagString(text: string): ParamsState {
  const out: ParamsState = { ...DEFAULT_PARAMS };
  const toks = text.split(/\s+/).filter((t) => t.length > 0);
  let i = 0;
  while (i < toks.length) {
    const dash = toks[i];
    if (dash !== "-p") {
      throw new FlagStringError(`expected -p, got '${dash}'`);
    }
    const name = toks[i + 1];
    if (name === undefined) {
      throw new FlagStringError("dangling -p");
    }
    i += 2;
    if (name === "init") {
      out.init = true;
      continue;
    }
    const val = toks[i];
    if (val === undefined) {
      throw new FlagStringError(`missing value for -p ${name}`);
    }
    i += 1;
    if (name === "MININT") {
      out.minint = parseInt10(name, val);
    } else if (name === "MAXINT") {
      out.maxint = parseInt10(name, val);
    } else if (name === "TIME_OUT") {
      out.timeoutMs = parseInt10(name, val);
    } else if (name === "KODKOD" || name === "SMT" || name === "CLPFD") {
      if (val !== "TRUE" && val !== "FALSE") {
        throw new FlagStringError(`-p ${name} takes TRUE or FALSE, got '${val}'`);
      }
      const on = val === "TRUE";
      if (name === "KODKOD") out.kodkod = on;
      else if (name === "SMT") out.smt = on;
      else out.clpfd = on;
    } else {
      throw new FlagStringError(`unknown parameter '${name}'`);
    }
  }
  if (out.minint >= out.maxint) {
    throw new FlagStringError("minint must be strictly below maxint");
  }
  if (out.timeoutMs <= 0) {
    throw new FlagStringError("TIME_OUT must be positive");
  }
  return out;
}

/* Request body form; the server accepts any subset but sending every field
   keeps the echo comparison trivial. */
export function toParamsJson(p: ParamsState): ParamsJson {
  return {
    minint: p.minint,
    maxint: p.maxint,
    timeout_ms: p.timeoutMs,
    init: p.init,
    kodkod: p.kodkod,
    smt: p.smt,
    clpfd: p.clpfd,
  };
}

export function fromEchoedParams(e: {
  minint: number;
  maxint: number;
  timeout_ms: number;
  init: boolean;
  kodkod: boolean;
  smt: boolean;
  clpfd: boolean;
}): ParamsState {
  return {
    minint: e.minint,
    maxint: e.maxint,
    timeoutMs: e.timeout_ms,
    init: e.init,
    kodkod: e.kodkod,
    smt: e.smt,
    clpfd: e.clpfd,
  };
}
