export type Filters = {
  disease: string | null
  city: string | null
  days: number
}

export const DEFAULT_DAYS = 90
export const MIN_DAYS = 1
export const MAX_DAYS = 90

export function defaultFilters(): Filters {
  return { disease: null, city: null, days: DEFAULT_DAYS }
}

/** Parse filters from a URL query string; anything invalid falls back to
 * the default so a mangled shared link still loads. */
export function parseFilters(search: string): Filters {
  const params = new URLSearchParams(search)
  const filters = defaultFilters()
  const disease = params.get('disease')
  if (disease && /^[a-z0-9_]+$/.test(disease)) {
    filters.disease = disease
  }
  const city = params.get('city')
  if (city && /^[a-z0-9_]+$/.test(city)) {
    filters.city = city
  }
  const days = Number(params.get('days'))
  if (Number.isInteger(days) && days >= MIN_DAYS && days <= MAX_DAYS) {
    filters.days = days
  }
  return filters
}

/** Serialize for both the API request and the shareable page URL. Defaults
 * are omitted so the bare URL stays clean. */
export function serializeFilters(filters: Filters): string {
  const params = new URLSearchParams()
  if (filters.disease) params.set('disease', filters.disease)
  if (filters.city) params.set('city', filters.city)
  if (filters.days !== DEFAULT_DAYS) params.set('days', String(filters.days))
  return params.toString()
}

export function apiQuery(filters: Filters): string {
  const params = new URLSearchParams()
  if (filters.disease) params.set('disease', filters.disease)
  if (filters.city) params.set('city', filters.city)
  params.set('days', String(filters.days))
  return params.toString()
}
