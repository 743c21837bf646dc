/** Wizard state machine, kept pure so it can run headless.
 *
 * The evaluator answers one three-choice question per pending pair. The main
 * queue only ever shrinks: answering removes the question, revising an
 * already-answered pair overwrites in place via a separate revision list and
 * never re-opens the queue. A context whose consistency ratio exceeds the
 * gate stays flagged until a revision brings it back under.
 */

import type {
  ContextInfo,
  JudgmentResponse,
  JudgmentValue,
  SessionInfo,
} from "./types.js";

export interface Question {
  context: string;
  i: string;
  j: string;
}

export interface ContextGate {
  complete: boolean;
  cr?: number;
  gate?: boolean;
}

export interface WizardState {
  sessionId: string;
  revision: number;
  /** unanswered questions; shrink-only */
  queue: Question[];
  /** guided revision pass: re-asked pairs of one context */
  revisit: Question[];
  answers: Record<string, JudgmentValue>;
  gates: Record<string, ContextGate>;
}

export function questionKey(q: Question): string {
  return `${q.context}|${q.i}|${q.j}`;
}

/** Question order walks the hierarchy top-down: the criteria matrix first,
 * then sub-criteria groups, then the alternative contexts. */
export function questionOrder(info: SessionInfo): Question[] {
  const alternatives = new Set(info.alternatives.map((a) => a.id));
  const criteria = new Set(info.criteria.map((c) => c.id));
  const rank = (ctx: ContextInfo): number => {
    if (ctx.members.every((m) => alternatives.has(m.id))) return 2;
    return ctx.members.some((m) => criteria.has(m.id)) ? 0 : 1;
  };
  const ordered = info.contexts
    .map((ctx, index) => ({ ctx, index, rank: rank(ctx) }))
    .sort((a, b) => a.rank - b.rank || a.index - b.index);
  const questions: Question[] = [];
  for (const { ctx } of ordered) {
    for (const [i, j] of ctx.missing) {
      questions.push({ context: ctx.id, i, j });
    }
  }
  return questions;
}

export function initWizard(info: SessionInfo): WizardState {
  const gates: Record<string, ContextGate> = {};
  for (const ctx of info.contexts) {
    gates[ctx.id] = { complete: ctx.complete, cr: ctx.cr, gate: ctx.gate };
  }
  return {
    sessionId: info.id,
    revision: info.revision,
    queue: questionOrder(info),
    revisit: [],
    answers: {},
    gates,
  };
}

/** Fold a submitted answer and the service's acknowledgement into the state. */
export function applyAnswer(state: WizardState, q: Question, value: JudgmentValue,
                            response: JudgmentResponse): WizardState {
  const key = questionKey(q);
  const drop = (list: Question[]) => list.filter((x) => questionKey(x) !== key);
  const gate: ContextGate = {
    complete: response.context.complete,
    cr: response.priority?.cr ?? response.context.cr,
    gate: response.priority?.gate ?? response.context.gate,
  };
  return {
    ...state,
    revision: response.revision,
    queue: drop(state.queue),
    revisit: drop(state.revisit),
    answers: { ...state.answers, [key]: value },
    gates: { ...state.gates, [q.context]: gate },
  };
}

/** Open a guided revision pass re-asking every pair of one context. The main
 * queue is untouched: revision overwrites in place. */
export function startRevision(state: WizardState, context: ContextInfo): WizardState {
  const revisit: Question[] = [];
  for (let a = 0; a < context.members.length; a++) {
    for (let b = a + 1; b < context.members.length; b++) {
      revisit.push({ context: context.id, i: context.members[a].id,
                     j: context.members[b].id });
    }
  }
  return { ...state, revisit };
}

export function nextQuestion(state: WizardState): Question | null {
  return state.revisit[0] ?? state.queue[0] ?? null;
}

export function isComplete(state: WizardState): boolean {
  return state.queue.length === 0;
}

/** Contexts currently flagged over the consistency gate. */
export function overThreshold(state: WizardState): string[] {
  return Object.entries(state.gates)
    .filter(([, g]) => g.complete && g.gate === false)
    .map(([id]) => id);
}

export function progress(state: WizardState): { answered: number; total: number } {
  const answered = Object.keys(state.answers).length;
  return { answered, total: answered + state.queue.length };
}
