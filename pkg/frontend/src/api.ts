import { apiQuery, type Filters } from './filters'
import type { DiseaseOption, EventCollection, EventFeature } from './types'

/** API base: build-time env var, overridable with ?api= for dev. */
export function apiBase(search = window.location.search): string {
  const override = new URLSearchParams(search).get('api')
  if (override) return override.replace(/\/$/, '')
  const env = import.meta.env?.VITE_API_BASE as string | undefined
  return (env ?? 'http://127.0.0.1:8080').replace(/\/$/, '')
}

export class ApiError extends Error {}

async function getJson<T>(url: string): Promise<T> {
  let response: Response
  try {
    response = await fetch(url)
  } catch (err) {
    throw new ApiError(`API unreachable: ${err}`)
  }
  if (!response.ok) {
    throw new ApiError(`API error ${response.status} for ${url}`)
  }
  return (await response.json()) as T
}

/** One in-flight query at a time: responses arriving after a newer request
 * was issued are discarded (resolved as null). */
export function makeEventsFetcher(base: string) {
  let seq = 0
  return async (filters: Filters): Promise<EventCollection | null> => {
    const mySeq = ++seq
    const doc = await getJson<EventCollection>(
      `${base}/api/events.geojson?${apiQuery(filters)}`,
    )
    return mySeq === seq ? doc : null
  }
}

export async function fetchEventDetail(
  base: string,
  eventId: number,
): Promise<EventFeature['properties']> {
  return getJson(`${base}/api/events/${eventId}`)
}

export async function fetchDiseases(base: string): Promise<DiseaseOption[]> {
  const doc = await getJson<{ diseases: DiseaseOption[] }>(`${base}/api/diseases`)
  return doc.diseases
}
