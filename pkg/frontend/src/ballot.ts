// Ballot state: two disjoint zones over the visible proposals. `ranked`
// is the priority list exactly as it will be sent; `available` holds the
// rest in creation order. All operations return a new view.

import type { ProposalCard } from "./api.js";

export interface BallotView {
  ranked: ProposalCard[];
  available: ProposalCard[];
}

function byOrdinal(a: ProposalCard, b: ProposalCard): number {
  return a.ordinal - b.ordinal;
}

/** Build a view from the server's proposal list, optionally restoring a
 * previously submitted ranking (ids not present any more are dropped). */
export function fromProposals(cards: ProposalCard[], rankedIds: string[] = []): BallotView {
  const byId = new Map(cards.map((c) => [c.id, c]));
  const ranked = rankedIds.map((id) => byId.get(id)).filter((c): c is ProposalCard => !!c);
  const rankedSet = new Set(ranked.map((c) => c.id));
  const available = cards.filter((c) => !rankedSet.has(c.id)).sort(byOrdinal);
  return { ranked, available };
}

/** Approving appends at the END of the list: approval order is the
 * initial priority order. Approving an already ranked card is a no-op. */
export function approve(view: BallotView, id: string): BallotView {
  const card = view.available.find((c) => c.id === id);
  if (!card) return view;
  return {
    ranked: [...view.ranked, card],
    available: view.available.filter((c) => c.id !== id),
  };
}

/** The card goes back to the available zone; the rest close ranks. */
export function unapprove(view: BallotView, id: string): BallotView {
  const card = view.ranked.find((c) => c.id === id);
  if (!card) return view;
  return {
    ranked: view.ranked.filter((c) => c.id !== id),
    available: [...view.available, card].sort(byOrdinal),
  };
}

/** Adjacent swap, clamped at the ends of the list. */
export function move(view: BallotView, id: string, direction: "up" | "down"): BallotView {
  const index = view.ranked.findIndex((c) => c.id === id);
  if (index < 0) return view;
  const target = direction === "up" ? index - 1 : index + 1;
  if (target < 0 || target >= view.ranked.length) return view;
  const ranked = [...view.ranked];
  [ranked[index], ranked[target]] = [ranked[target], ranked[index]];
  return { ...view, ranked };
}

/** The order shown is the order sent: this array is the PUT body. */
export function serialize(view: BallotView): string[] {
  return view.ranked.map((c) => c.id);
}

export function totalCost(view: BallotView): number {
  return view.ranked.reduce((sum, c) => sum + c.cost, 0);
}
