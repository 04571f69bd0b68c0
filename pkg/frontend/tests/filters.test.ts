import { describe, expect, it } from 'vitest'

import {
  DEFAULT_DAYS,
  apiQuery,
  defaultFilters,
  parseFilters,
  serializeFilters,
} from '../src/filters'

describe('parseFilters', () => {
  it('returns defaults for an empty query string', () => {
    expect(parseFilters('')).toEqual({ disease: null, city: null, days: 90 })
  })

  it('reads valid params', () => {
    expect(parseFilters('?disease=dengue&city=lahore&days=7')).toEqual({
      disease: 'dengue',
      city: 'lahore',
      days: 7,
    })
  })

  it('resets invalid params to defaults', () => {
    expect(parseFilters('?days=0')).toEqual(defaultFilters())
    expect(parseFilters('?days=999')).toEqual(defaultFilters())
    expect(parseFilters('?days=soon')).toEqual(defaultFilters())
    expect(parseFilters('?disease=<script>')).toEqual(defaultFilters())
  })

  it('round-trips through serializeFilters', () => {
    const filters = { disease: 'dengue', city: null, days: 14 }
    expect(parseFilters('?' + serializeFilters(filters))).toEqual(filters)
    expect(parseFilters('?' + serializeFilters(defaultFilters()))).toEqual(
      defaultFilters(),
    )
  })
})

describe('serializeFilters', () => {
  it('omits defaults so the bare URL stays clean', () => {
    expect(serializeFilters(defaultFilters())).toBe('')
    expect(serializeFilters({ disease: 'dengue', city: null, days: DEFAULT_DAYS }))
      .toBe('disease=dengue')
  })
})

describe('apiQuery', () => {
  it('always sends days explicitly to the API', () => {
    expect(apiQuery(defaultFilters())).toBe('days=90')
    expect(apiQuery({ disease: 'dengue', city: 'lahore', days: 1 })).toBe(
      'disease=dengue&city=lahore&days=1',
    )
  })
})
