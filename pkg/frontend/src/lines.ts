/** Pure helpers over the service's sensitivity report.
 *
 * The report is authoritative: rankings come from its rank segments and
 * crossover markers sit exactly at the reported parameters. Between
 * crossovers the score curves are linear, so slider rendering is plain
 * interpolation of the reported line coefficients — no extra requests.
 */

import type { RankSegment, ScoreLine, SensitivityPayload } from "./types.js";

export function scoreAt(line: ScoreLine, t: number): number {
  return t * line.p + (1 - t) * line.rest;
}

/** The rank segment containing t; boundaries belong to both neighbours, the
 * earlier one wins. */
export function segmentAt(segments: RankSegment[], t: number): RankSegment {
  for (const segment of segments) {
    if (segment.lo <= t && t <= segment.hi) return segment;
  }
  throw new RangeError(`t=${t} outside [0, 1]`);
}

export function displayedRanking(report: SensitivityPayload, t: number): string[] {
  return segmentAt(report.rank_segments, t).ranking;
}

export interface LiveScore {
  alternative: string;
  score: number;
}

/** Scores at slider position t, ordered by the segment's authoritative
 * ranking. */
export function liveScores(report: SensitivityPayload, t: number): LiveScore[] {
  const byId = new Map(report.lines.map((line) => [line.alternative, line]));
  return displayedRanking(report, t).map((alternative) => ({
    alternative,
    score: scoreAt(byId.get(alternative)!, t),
  }));
}

/** Crossovers annotated with the pair that swaps, verbatim at the reported
 * parameters. */
export function crossoverMarks(report: SensitivityPayload): {
  t: number;
  label: string;
  degenerate: boolean;
}[] {
  return report.crossovers.map((c) => ({
    t: c.t,
    label: `${c.a} / ${c.b}`,
    degenerate: c.degenerate,
  }));
}

/** Chart geometry: polyline points for one score line over [0, 1]. Linear,
 * so the two endpoints suffice. */
export function linePoints(line: ScoreLine, width: number, height: number,
                           maxScore: number): string {
  const y = (s: number) => height - (s / maxScore) * height;
  return `0,${y(scoreAt(line, 0))} ${width},${y(scoreAt(line, 1))}`;
}
