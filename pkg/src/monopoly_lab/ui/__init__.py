# Grid rendering
