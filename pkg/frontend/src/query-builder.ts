/** Helper form model: novice users fill wordform/lemma/POS fields per
 * pattern and the bracket query text is generated; experts type it raw. */

export interface PatternFields {
  word?: string
  lemma?: string
  pos?: string
}

function quote(value: string): string {
  return `"${value.replace(/"/g, '')}"`
}

/** Builds `[word="..." lemma="..." pos="..."] ...` from the helper form. */
export function buildQuery(patterns: PatternFields[]): string {
  return patterns
    .map((p) => {
      const parts: string[] = []
      if (p.word) parts.push(`word=${quote(p.word)}`)
      if (p.lemma) parts.push(`lemma=${quote(p.lemma)}`)
      if (p.pos) parts.push(`pos=${quote(p.pos)}`)
      return `[${parts.join(' ')}]`
    })
    .join(' ')
}
