/** Segment playback over a media element.
 *
 * A hit locates [start_ms, end_ms) inside a larger audio file; playback seeks
 * to the start and pauses once the clock passes the end. The media element is
 * injected through a minimal interface so tests can drive a fake clock.
 */

export interface PlaybackRequest {
  file: string
  startMs: number
  endMs: number
}

/** The slice of HTMLAudioElement the player needs. */
export interface MediaElement {
  src: string
  /** seconds */
  currentTime: number
  play(): Promise<void> | void
  pause(): void
  addEventListener(type: 'timeupdate' | 'error', listener: () => void): void
  removeEventListener(type: 'timeupdate' | 'error', listener: () => void): void
}

export class SegmentPlayer {
  private active: { element: MediaElement; onTick: () => void; onError: () => void } | null = null

  constructor(
    private readonly createElement: (src: string) => MediaElement,
    private readonly onAudioError: (request: PlaybackRequest) => void = () => {},
  ) {}

  get playing(): boolean {
    return this.active !== null
  }

  /** Starts the segment; any previous segment is stopped first. */
  playSegment(audioUrl: string, request: PlaybackRequest): void {
    if (request.endMs <= request.startMs) {
      throw new Error(`empty segment: ${request.startMs}..${request.endMs}`)
    }
    this.stop()
    const element = this.createElement(audioUrl)
    const endSeconds = request.endMs / 1000
    const onTick = () => {
      if (element.currentTime >= endSeconds) this.stop()
    }
    const onError = () => {
      this.stop()
      this.onAudioError(request)
    }
    element.addEventListener('timeupdate', onTick)
    element.addEventListener('error', onError)
    this.active = { element, onTick, onError }
    element.currentTime = request.startMs / 1000
    void element.play()
  }

  stop(): void {
    if (this.active === null) return
    const { element, onTick, onError } = this.active
    this.active = null
    element.removeEventListener('timeupdate', onTick)
    element.removeEventListener('error', onError)
    element.pause()
  }
}
