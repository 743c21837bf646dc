/** Contract suite: drives the UI's headless logic against a live service
 * instance (spawned `tahp serve --fixture`). */

import { ChildProcess, spawn } from "node:child_process";
import { createServer } from "node:net";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { displayedRanking, liveScores, scoreAt } from "../src/lines.js";
import { buildResultsView } from "../src/results.js";
import type { JudgmentValue, SessionInfo } from "../src/types.js";
import {
  applyAnswer,
  initWizard,
  isComplete,
  nextQuestion,
  overThreshold,
  startRevision,
} from "../src/wizard.js";

const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

let proc: ChildProcess;
let client: Client;
let fixtureId: string;

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

async function waitReady(base: string): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${base}/sessions`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("service did not come up within 30s");
}

beforeAll(async () => {
  const port = await freePort();
  proc = spawn("python3", [
    "-m", "tahp.cli", "serve", "--fixture",
    "--host", "127.0.0.1", "--port", String(port),
  ], { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] });
  const base = `http://127.0.0.1:${port}`;
  await waitReady(base);
  client = new Client(base);
  const sessions = await client.listSessions();
  fixtureId = sessions[0].id;
});

afterAll(() => {
  proc?.kill();
});

describe("wizard contract", () => {
  it("completing the fixture's question list reproduces the document byte-identically", async () => {
    // reference document + answer sheet from the preloaded fixture session
    const reference = (await client.save(fixtureId)).document;
    const referenceDoc = JSON.parse(reference);
    const answers = new Map<string, JudgmentValue>();
    const flip: Record<JudgmentValue, JudgmentValue> = { eq: "eq", gt: "lt", lt: "gt" };
    for (const j of referenceDoc.judgments) {
      answers.set(`${j.context}|${j.i}|${j.j}`, j.value);
      answers.set(`${j.context}|${j.j}|${j.i}`, flip[j.value as JudgmentValue]);
    }

    // fresh session from the judgment-free scaffold
    const scaffold = { ...referenceDoc, judgments: [] };
    const created = await client.createSession(scaffold);
    let info = await client.session(created.id);
    expect(info.complete).toBe(false);

    let state = initWizard(info);
    expect(state.queue.length).toBe(44); // 6+1+3+3+1 criteria pairs + 10*3 alternative pairs
    while (!isComplete(state)) {
      const q = nextQuestion(state)!;
      const value = answers.get(`${q.context}|${q.i}|${q.j}`)!;
      expect(value).toBeDefined();
      const response = await client.submitJudgment(created.id, q.context, q.i, q.j, value);
      state = applyAnswer(state, q, value, response);
    }
    expect(overThreshold(state)).toEqual([]);

    const saved = await client.save(created.id);
    expect(saved.document).toBe(reference);
  });

  it("a context answered cyclically shows a failing gate until revised", async () => {
    const doc = {
      format_version: "1",
      name: "gate-demo",
      theta: 3.0,
      nodes: [
        { id: "goal", label: "Goal", level: "goal", parent: null },
        { id: "c0", label: "C0", level: "criterion", parent: "goal" },
        { id: "c1", label: "C1", level: "criterion", parent: "goal" },
        { id: "c2", label: "C2", level: "criterion", parent: "goal" },
      ],
      alternatives: [{ id: "a", label: "A" }, { id: "b", label: "B" }],
      judgments: [],
    };
    const created = await client.createSession(doc);
    let state = initWizard(await client.session(created.id));

    const cyclic: Record<string, JudgmentValue> =
      { "c0|c1": "gt", "c0|c2": "lt", "c1|c2": "gt" };
    while (nextQuestion(state) && nextQuestion(state)!.context === "goal") {
      const q = nextQuestion(state)!;
      const value = cyclic[`${q.i}|${q.j}`];
      const response = await client.submitJudgment(created.id, q.context, q.i, q.j, value);
      state = applyAnswer(state, q, value, response);
    }
    expect(state.gates["goal"].cr).toBeCloseTo(1.149, 3);
    expect(overThreshold(state)).toEqual(["goal"]);

    // guided revision pass: overwrite the context to all-equal
    const goalCtx = (await client.session(created.id)).contexts
      .find((c) => c.id === "goal")!;
    state = startRevision(state, goalCtx);
    while (state.revisit.length > 0) {
      const q = nextQuestion(state)!;
      const response = await client.submitJudgment(created.id, q.context, q.i, q.j, "eq");
      state = applyAnswer(state, q, "eq", response);
    }
    expect(overThreshold(state)).toEqual([]);
    expect(state.gates["goal"].gate).toBe(true);
  });
});

describe("results contract", () => {
  it("view-model numbers equal the service response exactly", async () => {
    const payload = await client.results(fixtureId);
    const view = buildResultsView(payload);
    const weightsById = new Map(payload.global_weights.map((w) => [w.id, w.weight]));
    for (const row of view.criteria) {
      expect(row.value === weightsById.get(row.id)).toBe(true);
    }
    payload.alternative_scores.forEach((entry, idx) => {
      expect(view.alternatives[idx].value === entry.score).toBe(true);
    });
    expect(view.overallInconsistency === payload.overall_inconsistency).toBe(true);
    expect(view.inconsistencyOk).toBe(true);
    // fixture drill-down: every context passes the gate
    expect(view.contexts.every((c) => c.gate)).toBe(true);
  });

  it("repeated reads are identical (cache contract)", async () => {
    const a = await client.results(fixtureId);
    const b = await client.results(fixtureId);
    expect(b).toEqual(a);
  });
});

describe("sensitivity contract", () => {
  it("culture slider at t=0 swaps ranks 2 and 3 with rank 1 unchanged", async () => {
    const report = await client.sensitivity(fixtureId, "culture");
    const atZero = displayedRanking(report, 0);
    expect(atZero).toEqual(["confidentiality", "availability", "integrity"]);
    expect(atZero[0]).toBe(report.base_ranking[0]);
    expect(report.ranking_at_zero).toEqual(atZero);
    // crossover markers render exactly at the reported parameters
    expect(report.crossovers.length).toBeGreaterThan(0);
    for (const mark of report.crossovers) {
      expect(mark.t).toBeGreaterThan(0);
      expect(mark.t).toBeLessThan(1);
    }
  });

  it("slider at the base weight reproduces the results ranking", async () => {
    const [report, results] = await Promise.all([
      client.sensitivity(fixtureId, "culture"),
      client.results(fixtureId),
    ]);
    expect(displayedRanking(report, report.base_weight)).toEqual(results.ranking);
    const scores = new Map(results.alternative_scores.map((s) => [s.id, s.score]));
    for (const entry of liveScores(report, report.base_weight)) {
      expect(entry.score).toBeCloseTo(scores.get(entry.alternative)!, 10);
    }
  });

  it("technology full sweep never changes the rank-1 row", async () => {
    const report = await client.sensitivity(fixtureId, "technology");
    expect(report.rank_one_changes).toBe(false);
    for (const segment of report.rank_segments) {
      expect(segment.ranking[0]).toBe("confidentiality");
    }
    for (let t = 0; t <= 1.0001; t += 0.05) {
      const shown = liveScores(report, Math.min(t, 1));
      expect(shown[0].alternative).toBe("confidentiality");
    }
  });

  it("line endpoints drive smooth rendering between crossovers", async () => {
    const report = await client.sensitivity(fixtureId, "culture");
    for (const line of report.lines) {
      const mid = scoreAt(line, 0.5);
      expect(mid).toBeCloseTo((scoreAt(line, 0) + scoreAt(line, 1)) / 2, 12);
    }
  });
});

describe("incomplete sessions", () => {
  it("results 409 carries the missing-pair manifest the wizard redirects with", async () => {
    const scaffoldInfo: SessionInfo = await client.session(fixtureId);
    const doc = JSON.parse((await client.save(fixtureId)).document);
    doc.judgments = doc.judgments.slice(0, 10);
    const created = await client.createSession(doc);
    try {
      await client.results(created.id);
      expect.unreachable("expected a 409");
    } catch (err: any) {
      expect(err.status).toBe(409);
      expect(err.code).toBe("model/incomplete");
      expect(Object.keys(err.missing ?? {}).length).toBeGreaterThan(0);
    }
    expect(scaffoldInfo.complete).toBe(true);
  });
});
