import { describe, expect, it } from "vitest";

import type { JudgmentResponse, SessionInfo } from "../src/types.js";
import {
  applyAnswer,
  initWizard,
  isComplete,
  nextQuestion,
  overThreshold,
  progress,
  questionOrder,
  startRevision,
} from "../src/wizard.js";

function info(): SessionInfo {
  return {
    schema_version: "1",
    id: "s1",
    name: "demo",
    theta: 3,
    revision: 0,
    complete: false,
    criteria: [
      { id: "c0", label: "C0" },
      { id: "c1", label: "C1" },
    ],
    alternatives: [
      { id: "a", label: "A" },
      { id: "b", label: "B" },
    ],
    contexts: [
      {
        id: "goal", label: "Goal", required: 1, complete: false,
        members: [{ id: "c0", label: "C0" }, { id: "c1", label: "C1" }],
        missing: [["c0", "c1"]],
      },
      {
        id: "c0", label: "C0", required: 1, complete: false,
        members: [{ id: "s0", label: "S0" }, { id: "s1", label: "S1" }],
        missing: [["s0", "s1"]],
      },
      {
        id: "s0", label: "S0", required: 1, complete: false,
        members: [{ id: "a", label: "A" }, { id: "b", label: "B" }],
        missing: [["a", "b"]],
      },
      {
        id: "s1", label: "S1", required: 1, complete: false,
        members: [{ id: "a", label: "A" }, { id: "b", label: "B" }],
        missing: [["a", "b"]],
      },
      {
        id: "c1", label: "C1", required: 1, complete: false,
        members: [{ id: "a", label: "A" }, { id: "b", label: "B" }],
        missing: [["a", "b"]],
      },
    ],
  };
}

function ack(context: string, complete: boolean, revision: number,
             cr?: number): JudgmentResponse {
  return {
    revision,
    context: {
      id: context, label: context, members: [], required: 1,
      missing: complete ? [] : [["x", "y"]], complete,
      cr, gate: cr === undefined ? undefined : cr <= 0.1,
    },
  };
}

describe("questionOrder", () => {
  it("asks criteria first, then sub-criteria groups, then alternatives", () => {
    const contexts = questionOrder(info()).map((q) => q.context);
    expect(contexts).toEqual(["goal", "c0", "s0", "s1", "c1"]);
  });

  it("skips already-complete contexts", () => {
    const session = info();
    session.contexts[0].missing = [];
    session.contexts[0].complete = true;
    expect(questionOrder(session).map((q) => q.context))
      .toEqual(["c0", "s0", "s1", "c1"]);
  });

  it("zero-question sessions complete immediately", () => {
    const session = info();
    for (const ctx of session.contexts) {
      ctx.missing = [];
      ctx.complete = true;
    }
    const state = initWizard(session);
    expect(isComplete(state)).toBe(true);
    expect(nextQuestion(state)).toBeNull();
  });
});

describe("answer handling", () => {
  it("the queue only shrinks as answers land", () => {
    let state = initWizard(info());
    const before = state.queue.length;
    const q = nextQuestion(state)!;
    state = applyAnswer(state, q, "gt", ack(q.context, true, 1, 0.0));
    expect(state.queue.length).toBe(before - 1);
    expect(state.revision).toBe(1);
    expect(progress(state)).toEqual({ answered: 1, total: before });
  });

  it("records per-context consistency when a context completes", () => {
    let state = initWizard(info());
    const q = nextQuestion(state)!;
    state = applyAnswer(state, q, "gt", ack(q.context, true, 1, 1.149));
    expect(state.gates[q.context]).toEqual(
      { complete: true, cr: 1.149, gate: false });
    expect(overThreshold(state)).toEqual([q.context]);
  });

  it("an over-threshold context stays flagged until revised under the gate", () => {
    let state = initWizard(info());
    const q = nextQuestion(state)!;
    state = applyAnswer(state, q, "gt", ack(q.context, true, 1, 0.5));
    expect(overThreshold(state)).toEqual([q.context]);

    const ctx = info().contexts.find((c) => c.id === q.context)!;
    state = startRevision(state, ctx);
    expect(state.queue.length).toBe(initWizard(info()).queue.length - 1);
    const revisit = nextQuestion(state)!;
    expect(revisit.context).toBe(q.context);
    state = applyAnswer(state, revisit, "eq", ack(q.context, true, 2, 0.0));
    expect(overThreshold(state)).toEqual([]);
    expect(state.revisit).toEqual([]);
  });

  it("revision re-opens nothing in the main queue", () => {
    let state = initWizard(info());
    const first = nextQuestion(state)!;
    state = applyAnswer(state, first, "gt", ack(first.context, true, 1, 0.0));
    const queueAfterAnswer = [...state.queue];
    const ctx = info().contexts.find((c) => c.id === first.context)!;
    state = startRevision(state, ctx);
    expect(state.queue).toEqual(queueAfterAnswer);
  });

  it("answers overwrite in place on repeat", () => {
    let state = initWizard(info());
    const q = nextQuestion(state)!;
    state = applyAnswer(state, q, "gt", ack(q.context, true, 1, 0.0));
    const ctx = info().contexts.find((c) => c.id === q.context)!;
    state = startRevision(state, ctx);
    const again = nextQuestion(state)!;
    state = applyAnswer(state, again, "lt", ack(q.context, true, 2, 0.0));
    expect(state.answers[`${q.context}|${q.i}|${q.j}`]).toBe("lt");
    expect(progress(state).answered).toBe(1);
  });
});
