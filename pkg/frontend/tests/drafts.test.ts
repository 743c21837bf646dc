import { describe, expect, it } from "vitest";

import {
  acknowledge,
  emptyDraft,
  mapStore,
  reconcile,
  recordDraft,
} from "../src/drafts.js";
import type { SessionInfo } from "../src/types.js";

const q1 = { context: "goal", i: "c0", j: "c1" };
const q2 = { context: "c0", i: "a", j: "b" };

function sessionWithMissing(missing: [string, string][]): SessionInfo {
  return {
    schema_version: "1", id: "s1", name: "demo", theta: 3, revision: 5,
    complete: missing.length === 0,
    criteria: [{ id: "c0", label: "C0" }, { id: "c1", label: "C1" }],
    alternatives: [{ id: "a", label: "A" }, { id: "b", label: "B" }],
    contexts: [{
      id: "goal", label: "Goal", required: 1, missing, complete: !missing.length,
      members: [{ id: "c0", label: "C0" }, { id: "c1", label: "C1" }],
    }],
  };
}

describe("draft lifecycle", () => {
  it("records, overwrites, and acknowledges answers", () => {
    let draft = emptyDraft(0);
    draft = recordDraft(draft, q1, "gt");
    draft = recordDraft(draft, q2, "eq");
    draft = recordDraft(draft, q1, "lt"); // overwrite, no duplicate
    expect(draft.pending).toHaveLength(2);
    expect(draft.pending.find((d) => d.question.context === "goal")!.value).toBe("lt");

    draft = acknowledge(draft, q1, 3);
    expect(draft.revision).toBe(3);
    expect(draft.pending.map((d) => d.question.context)).toEqual(["c0"]);
  });

  it("survives a reload through the store round-trip", () => {
    const store = mapStore();
    let draft = recordDraft(emptyDraft(0), q1, "gt");
    store.save("s1", draft);
    const restored = store.load("s1");
    expect(restored).toEqual(draft);
    store.clear("s1");
    expect(store.load("s1")).toBeNull();
  });
});

describe("reconcile", () => {
  it("resubmits drafts whose pairs the server still misses", () => {
    const draft = recordDraft(emptyDraft(0), q1, "gt");
    const { resubmit, dropped } = reconcile(draft, sessionWithMissing([["c0", "c1"]]));
    expect(resubmit).toHaveLength(1);
    expect(dropped).toHaveLength(0);
  });

  it("matches pairs in either orientation", () => {
    const reversed = { context: "goal", i: "c1", j: "c0" };
    const draft = recordDraft(emptyDraft(0), reversed, "lt");
    const { resubmit } = reconcile(draft, sessionWithMissing([["c0", "c1"]]));
    expect(resubmit).toHaveLength(1);
  });

  it("drops drafts the server has moved past", () => {
    const draft = recordDraft(emptyDraft(0), q1, "gt");
    const { resubmit, dropped } = reconcile(draft, sessionWithMissing([]));
    expect(resubmit).toHaveLength(0);
    expect(dropped).toHaveLength(1);
  });
});
