/** Typed client for the corpus query service HTTP JSON API.
 *
 * The service exposes `/search?q=...&limit=...&offset=...`, `/utterance/<id>`
 * and `/audio/<file>`; this module is the only place the webui talks to it.
 */

export interface HitToken {
  wordform: string
  lemma: string | null
  pos: string | null
}

export interface HitAudio {
  file: string | null
  start_ms: number | null
  end_ms: number | null
}

export interface Hit {
  utterance: string
  span: [number, number]
  tokens: HitToken[]
  left: string[]
  right: string[]
  audio: HitAudio
}

export interface SearchResponse {
  total: number
  hits: Hit[]
}

export interface ApiError {
  error: string
  detail: string
}

/** Thrown for non-2xx responses; carries the service's machine-readable id. */
export class QueryServiceError extends Error {
  constructor(
    readonly status: number,
    readonly errorId: string,
    detail: string,
  ) {
    super(detail)
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class QueryClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  async search(q: string, limit: number, offset: number): Promise<SearchResponse> {
    const params = new URLSearchParams()
    params.set('q', q)
    params.set('limit', String(limit))
    params.set('offset', String(offset))
    const response = await this.fetchImpl(`${this.baseUrl}/search?${params.toString()}`)
    if (!response.ok) {
      const body = (await response.json()) as ApiError
      throw new QueryServiceError(response.status, body.error, body.detail)
    }
    return (await response.json()) as SearchResponse
  }

  async utterance(id: string): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}/utterance/${encodeURIComponent(id)}`)
    if (!response.ok) {
      const body = (await response.json()) as ApiError
      throw new QueryServiceError(response.status, body.error, body.detail)
    }
    return response.json()
  }

  audioUrl(file: string): string {
    return `${this.baseUrl}/audio/${encodeURIComponent(file)}`
  }
}
