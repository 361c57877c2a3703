/** Search screen state: a pure reducer plus a thin async controller.
 *
 * The rendered UI is a function of this state alone, so replaying a recorded
 * event trace reproduces the exact same output. At most one search is in
 * flight; each request carries a sequence number and responses that arrive
 * after a newer request has been issued are discarded.
 */

import { Hit, QueryClient, QueryServiceError } from './api.js'

export type Status =
  | { kind: 'idle' }
  | { kind: 'loading' }
  | { kind: 'error'; message: string }

export interface SearchState {
  query: string
  limit: number
  offset: number
  results: Hit[]
  total: number
  status: Status
  /** sequence number of the newest request issued */
  sequence: number
}

export function initialState(limit = 50): SearchState {
  return {
    query: '',
    limit,
    offset: 0,
    results: [],
    total: 0,
    status: { kind: 'idle' },
    sequence: 0,
  }
}

export type SearchEvent =
  | { kind: 'submitted'; query: string; offset: number; sequence: number }
  | { kind: 'succeeded'; sequence: number; hits: Hit[]; total: number }
  | { kind: 'failed'; sequence: number; message: string }

export function reduce(state: SearchState, event: SearchEvent): SearchState {
  switch (event.kind) {
    case 'submitted': {
      if (event.offset % state.limit !== 0) {
        throw new Error(`offset ${event.offset} is not a multiple of limit ${state.limit}`)
      }
      return {
        ...state,
        query: event.query,
        offset: event.offset,
        status: { kind: 'loading' },
        sequence: event.sequence,
      }
    }
    case 'succeeded': {
      if (event.sequence !== state.sequence) return state // stale response
      if (event.hits.length > state.limit) {
        throw new Error('server returned more hits than the requested limit')
      }
      return { ...state, results: event.hits, total: event.total, status: { kind: 'idle' } }
    }
    case 'failed': {
      if (event.sequence !== state.sequence) return state // stale response
      // Keep the previous results visible; only surface the message inline.
      return { ...state, status: { kind: 'error', message: event.message } }
    }
  }
}

/** Offsets the pagination controls may request: multiples of limit below total. */
export function pageOffsets(state: SearchState): number[] {
  const offsets: number[] = []
  for (let offset = 0; offset < state.total; offset += state.limit) {
    offsets.push(offset)
  }
  return offsets
}

/** Issues a search and folds the outcome back into state via the reducer. */
export class SearchController {
  private state: SearchState

  constructor(
    private readonly client: QueryClient,
    limit = 50,
    private readonly onChange: (state: SearchState) => void = () => {},
  ) {
    this.state = initialState(limit)
  }

  get current(): SearchState {
    return this.state
  }

  private dispatch(event: SearchEvent): void {
    this.state = reduce(this.state, event)
    this.onChange(this.state)
  }

  async submit(query: string, offset = 0): Promise<SearchState> {
    if (query.trim() === '') {
      this.dispatch({
        kind: 'failed',
        sequence: this.state.sequence,
        message: 'E_QUERY_EMPTY: enter a query',
      })
      return this.state
    }
    const sequence = this.state.sequence + 1
    this.dispatch({ kind: 'submitted', query, offset, sequence })
    try {
      const page = await this.client.search(query, this.state.limit, offset)
      this.dispatch({ kind: 'succeeded', sequence, hits: page.hits, total: page.total })
    } catch (err) {
      const message =
        err instanceof QueryServiceError ? `${err.errorId}: ${err.message}` : 'unreachable'
      this.dispatch({ kind: 'failed', sequence, message })
    }
    return this.state
  }
}
