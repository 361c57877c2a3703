import { describe, expect, it } from 'vitest'
import { kwicRows, rowsToHtml } from '../src/kwic'
import { buildQuery } from '../src/query-builder'
import { makeHit } from './stub-server'

describe('KWIC rows', () => {
  it('renders a "no results" row for an empty hit list', () => {
    expect(kwicRows([])).toEqual([])
    expect(rowsToHtml([])).toContain('no results')
  })

  it('keeps server order, one row per hit', () => {
    const rows = kwicRows([makeHit('u2', 'b'), makeHit('u1', 'a'), makeHit('u3', 'c')])
    expect(rows.map((r) => r.utterance)).toEqual(['u2', 'u1', 'u3'])
    expect(rowsToHtml(rows).match(/kwic-row/g)).toHaveLength(3)
  })

  it('omits the play control when the hit has no timing', () => {
    const rows = kwicRows([makeHit('u1', 'are')])
    expect(rows[0].play).toBeNull()
    expect(rowsToHtml(rows)).not.toContain('button')
  })

  it('carries timing into an enabled play control', () => {
    const rows = kwicRows([
      makeHit('u1', 'are', { file: 'u1.wav', start_ms: 100, end_ms: 400 }),
    ])
    expect(rows[0].play).toEqual({ file: 'u1.wav', startMs: 100, endMs: 400, enabled: true })
    expect(rowsToHtml(rows)).toContain('data-start="100"')
  })

  it('disables the control for a degenerate segment', () => {
    const rows = kwicRows([
      makeHit('u1', 'are', { file: 'u1.wav', start_ms: 400, end_ms: 400 }),
    ])
    expect(rows[0].play?.enabled).toBe(false)
    expect(rowsToHtml(rows)).toContain('disabled')
  })

  it('tooltips show lemma and part of speech per matched token', () => {
    const rows = kwicRows([makeHit('u1', 'Are')])
    expect(rows[0].tooltips).toEqual(['are/Nc'])
  })

  it('escapes markup in token text', () => {
    const hit = makeHit('u1', '<b>')
    expect(rowsToHtml(kwicRows([hit]))).toContain('&lt;b&gt;')
  })
})

describe('query builder form', () => {
  it('generates bracket syntax from helper fields', () => {
    expect(buildQuery([{ word: 'are', lemma: 'avea' }, { pos: 'Nc*' }])).toBe(
      '[word="are" lemma="avea"] [pos="Nc*"]',
    )
  })
})
