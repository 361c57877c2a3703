/** Browser wiring: query box, KWIC result table, pagination, playback.
 *
 * Expects a page with #query, #search, #status, #results (tbody) and #pager;
 * the service base URL comes from the single `data-base-url` attribute on the
 * document body.
 */

import { QueryClient } from './api.js'
import { kwicRows, rowsToHtml } from './kwic.js'
import { SegmentPlayer } from './player.js'
import { SearchController, SearchState, pageOffsets } from './state.js'

export function mount(doc: Document): SearchController {
  const baseUrl = doc.body.dataset.baseUrl ?? 'http://127.0.0.1:8000'
  const client = new QueryClient(baseUrl)
  const player = new SegmentPlayer((src) => {
    const audio = doc.createElement('audio')
    audio.src = src
    return audio
  })

  const queryBox = doc.querySelector('#query') as HTMLInputElement
  const statusBox = doc.querySelector('#status') as HTMLElement
  const results = doc.querySelector('#results') as HTMLElement
  const pager = doc.querySelector('#pager') as HTMLElement

  const render = (state: SearchState) => {
    statusBox.textContent =
      state.status.kind === 'error'
        ? state.status.message
        : state.status.kind === 'loading'
          ? 'searching…'
          : `${state.total} hits`
    results.innerHTML = rowsToHtml(kwicRows(state.results))
    pager.innerHTML = pageOffsets(state)
      .map(
        (offset) =>
          `<button class="page" data-offset="${offset}"` +
          `${offset === state.offset ? ' disabled' : ''}>` +
          `${offset / state.limit + 1}</button>`,
      )
      .join('')
  }

  const controller = new SearchController(client, 50, render)

  doc.querySelector('#search')?.addEventListener('click', () => {
    void controller.submit(queryBox.value)
  })
  pager.addEventListener('click', (event) => {
    const button = (event.target as HTMLElement).closest('button.page')
    if (button instanceof HTMLButtonElement && !button.disabled) {
      void controller.submit(controller.current.query, Number(button.dataset.offset))
    }
  })
  results.addEventListener('click', (event) => {
    const button = (event.target as HTMLElement).closest('button.play')
    if (button instanceof HTMLButtonElement && !button.disabled) {
      const file = button.dataset.file ?? ''
      player.playSegment(client.audioUrl(file), {
        file,
        startMs: Number(button.dataset.start),
        endMs: Number(button.dataset.end),
      })
    }
  })
  return controller
}
