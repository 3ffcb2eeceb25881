# Testes do gpdkit
