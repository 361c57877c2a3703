/** Keyword-in-context presentation of search hits.
 *
 * Rendering is split in two: a pure row model (testable without a DOM) and a
 * small HTML serializer used by the browser entry point.
 */

import { Hit } from './api.js'

export interface PlayControl {
  file: string
  startMs: number
  endMs: number
  /** false when the timing is degenerate (end ≤ start) */
  enabled: boolean
}

export interface KwicRow {
  utterance: string
  left: string
  match: string
  right: string
  /** one "lemma/POS" tooltip per matched token */
  tooltips: string[]
  /** present iff the hit carries audio timing */
  play: PlayControl | null
}

export function kwicRows(hits: Hit[]): KwicRow[] {
  return hits.map((hit) => {
    const { file, start_ms, end_ms } = hit.audio
    const timed = file !== null && start_ms !== null && end_ms !== null
    return {
      utterance: hit.utterance,
      left: hit.left.join(' '),
      match: hit.tokens.map((t) => t.wordform).join(' '),
      right: hit.right.join(' '),
      tooltips: hit.tokens.map((t) => `${t.lemma ?? '_'}/${t.pos ?? '_'}`),
      play: timed
        ? { file: file!, startMs: start_ms!, endMs: end_ms!, enabled: end_ms! > start_ms! }
        : null,
    }
  })
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
}

export function rowsToHtml(rows: KwicRow[]): string {
  if (rows.length === 0) {
    return '<tr class="kwic-empty"><td colspan="4">no results</td></tr>'
  }
  return rows
    .map((row) => {
      const play = row.play
        ? `<button class="play" data-file="${escapeHtml(row.play.file)}"` +
          ` data-start="${row.play.startMs}" data-end="${row.play.endMs}"` +
          `${row.play.enabled ? '' : ' disabled'}>&#9654;</button>`
        : ''
      return (
        `<tr class="kwic-row" data-utterance="${escapeHtml(row.utterance)}">` +
        `<td class="left">${escapeHtml(row.left)}</td>` +
        `<td class="match" title="${escapeHtml(row.tooltips.join(' '))}">` +
        `${escapeHtml(row.match)}</td>` +
        `<td class="right">${escapeHtml(row.right)}</td>` +
        `<td class="audio">${play}</td></tr>`
      )
    })
    .join('\n')
}
