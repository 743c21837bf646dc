/** Judgment wizard UI: one pending pair at a time, three choices, live
 * consistency feedback on context completion, and a guided revision pass for
 * contexts that fail the gate. Local answers are drafted to storage before
 * submission so a reload (or a flaky service) never loses work. */

import { ApiError, Client } from "./api.js";
import {
  Draft,
  DraftStore,
  acknowledge,
  emptyDraft,
  recordDraft,
  reconcile,
} from "./drafts.js";
import type { JudgmentValue, SessionInfo } from "./types.js";
import {
  Question,
  WizardState,
  applyAnswer,
  initWizard,
  isComplete,
  nextQuestion,
  overThreshold,
  progress,
  startRevision,
} from "./wizard.js";

const CHOICES: { value: JudgmentValue; text: (a: string, b: string) => string }[] = [
  { value: "gt", text: (a, _b) => `${a} is more important` },
  { value: "eq", text: () => "equally important" },
  { value: "lt", text: (_a, b) => `${b} is more important` },
];

export function renderWizard(root: HTMLElement, client: Client, info: SessionInfo,
                             store: DraftStore,
                             onComplete: () => void): void {
  let state: WizardState = initWizard(info);
  let draft: Draft = store.load(info.id) ?? emptyDraft(info.revision);
  const labels = new Map<string, string>();
  for (const ctx of info.contexts) {
    labels.set(ctx.id, ctx.label);
    for (const member of ctx.members) labels.set(member.id, member.label);
  }

  root.replaceChildren();
  const status = document.createElement("p");
  status.className = "wizard-status";
  const gateBar = document.createElement("div");
  gateBar.className = "gate-bar";
  const card = document.createElement("div");
  card.className = "question-card";
  root.append(status, gateBar, card);

  const submit = async (q: Question, value: JudgmentValue) => {
    draft = recordDraft(draft, q, value);
    store.save(info.id, draft);
    try {
      const response = await client.submitJudgment(info.id, q.context, q.i, q.j, value);
      state = applyAnswer(state, q, value, response);
      draft = acknowledge(draft, q, response.revision);
      store.save(info.id, draft);
    } catch (err) {
      if (err instanceof ApiError && err.status === 0) {
        status.textContent = "service unreachable — your answer is saved locally; retrying on next submit";
        return; // non-destructive: draft keeps the answer
      }
      throw err;
    }
    render();
  };

  const resubmitDrafts = async () => {
    const { resubmit } = reconcile(draft, await client.session(info.id));
    for (const pending of resubmit) {
      await submit(pending.question, pending.value);
    }
  };

  const render = () => {
    const { answered, total } = progress(state);
    status.textContent = `${answered} of ${total} judgments answered`;

    gateBar.replaceChildren();
    for (const ctxId of overThreshold(state)) {
      const chip = document.createElement("button");
      chip.className = "gate-chip";
      const cr = state.gates[ctxId].cr;
      chip.textContent =
        `${labels.get(ctxId) ?? ctxId}: CR ${cr?.toFixed(3) ?? "?"} over 0.1 — revise`;
      chip.addEventListener("click", () => {
        const ctx = info.contexts.find((c) => c.id === ctxId);
        if (ctx) {
          state = startRevision(state, ctx);
          render();
        }
      });
      gateBar.appendChild(chip);
    }

    const q = nextQuestion(state);
    card.replaceChildren();
    if (!q) {
      const done = document.createElement("p");
      done.textContent = isComplete(state)
        ? "All judgments answered."
        : "Waiting on remaining judgments.";
      card.appendChild(done);
      if (isComplete(state)) onComplete();
      return;
    }
    const heading = document.createElement("h3");
    heading.textContent =
      `Within ${labels.get(q.context) ?? q.context}: which matters more?`;
    const pair = document.createElement("p");
    pair.className = "question-pair";
    pair.textContent = `${labels.get(q.i) ?? q.i}  vs  ${labels.get(q.j) ?? q.j}`;
    card.append(heading, pair);
    for (const choice of CHOICES) {
      const button = document.createElement("button");
      button.className = "choice";
      button.textContent = choice.text(labels.get(q.i) ?? q.i, labels.get(q.j) ?? q.j);
      button.addEventListener("click", () => void submit(q, choice.value));
      card.appendChild(button);
    }
  };

  void resubmitDrafts().then(render, render);
}
